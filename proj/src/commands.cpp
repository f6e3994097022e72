#include "memtaxis/commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>
#include <vector>

#include "memtaxis/csv.hpp"
#include "memtaxis/diagnostics.hpp"
#include "memtaxis/linear.hpp"
#include "memtaxis/normalform.hpp"
#include "memtaxis/simulator.hpp"

namespace memtaxis {

namespace fs = std::filesystem;

namespace {

class Summary {
 public:
  void add(const std::string& key, const std::string& value) {
    text_ << key << " = " << value << '\n';
  }
  void add(const std::string& key, double value) { add(key, fmt_real(value)); }
  void add(const std::string& key, const std::optional<double>& value) {
    add(key, value ? fmt_real(*value) : std::string("none"));
  }
  void add(const std::string& key, int value) { add(key, std::to_string(value)); }
  void add(const std::string& key, bool value) { add(key, std::string(value ? "true" : "false")); }
  void section(const std::string& name) { text_ << '[' << name << "]\n"; }

  void emit(const fs::path& out, std::ostream& log) const {
    auto f = open_output(out / "summary.txt");
    f << text_.str();
    log << text_.str();
  }

 private:
  std::ostringstream text_;
};

struct Analysis {
  SteadyState steady;
  Linearization lin;
  StabilityReport report;
};

Analysis analyze(const KineticParams& kin, const TransportParams& tr, int n_max, int j_max) {
  Analysis a;
  a.steady = steady_state(kin);
  a.lin = linearize(kin, tr, a.steady);
  a.report = classify(a.lin, tr, n_max, j_max);
  return a;
}

std::string classification(const NormalForm& nf) {
  return to_string(nf.direction) + ", " + to_string(nf.orbit_stability);
}

void echo_inputs(Summary& s, const RunConfig& cfg) {
  s.section("inputs");
  s.add("beta", cfg.kin.beta);
  s.add("m", cfg.kin.m);
  s.add("s", cfg.kin.s);
  s.add("d11", cfg.tr.d11);
  s.add("d22", cfg.tr.d22);
  s.add("d21", cfg.tr.d21);
  s.add("xi", cfg.tr.xi);
  s.add("ell", cfg.tr.ell);
  if (cfg.delay.tau) s.add("tau", *cfg.delay.tau);
  s.add("n_max", cfg.n_max);
  s.add("j_max", cfg.j_max);
}

void echo_analysis(Summary& s, const Analysis& a) {
  s.section("steady_state");
  s.add("u_star", a.steady.u_star);
  s.add("v_star", a.steady.v_star);
  s.add("a11", a.lin.a11);
  s.add("a12", a.lin.a12);
  s.add("a21", a.lin.a21);
  s.add("a22", a.lin.a22);
  const StabilityReport& r = a.report;
  s.section("stability");
  s.add("C0", r.conditions.c0);
  s.add("C1", r.conditions.c1);
  s.add("C2", r.conditions.c2);
  s.add("A2_positive", r.conditions.a2_positive);
  s.add("window_n1", r.window.n1);
  s.add("window_n2", r.window.n2);
  if (!r.window.failure.empty()) s.add("window_note", r.window.failure);
  s.add("regime", to_string(r.regime));
  s.add("tau_star", r.tau_star);
  if (r.regime == Regime::DelayHopf) s.add("n_c", r.hopf_points.front().n_c);
  for (const HopfPoint& hp : r.hopf_points) {
    const ModeAnalysis& ma = r.modes.at(static_cast<std::size_t>(hp.n_c));
    s.add("hopf_mode", "n=" + std::to_string(hp.n_c) + " omega=" + fmt_real(hp.omega_nc) +
                           " tau_n0=" + fmt_real(hp.tau_c) +
                           " transversality=" + fmt_real(ma.transversality));
  }
  if (!r.note.empty()) s.add("note", r.note);
}

void write_analysis_csv(const fs::path& out, const StabilityReport& r) {
  auto f = open_output(out / "analysis.csv");
  f << "n,k,root_case,T,J,coupling,P,Q,Q_tilde,Gamma0,omega,tau_n0,tau_ladder,transversality\n";
  for (const ModeAnalysis& m : r.modes) {
    std::string ladder;
    for (std::size_t j = 0; j < m.tau_ladder.size(); ++j) {
      ladder += (j ? ";" : "") + fmt_real(m.tau_ladder[j]);
    }
    const std::optional<double> tau0 =
        m.tau_ladder.empty() ? std::nullopt : std::optional<double>(m.tau_ladder.front());
    f << m.n << ',' << fmt_real(m.k) << ',' << to_string(m.root_case) << ',' << fmt_real(m.T)
      << ',' << fmt_real(m.J) << ',' << fmt_real(m.coupling) << ',' << fmt_real(m.P) << ','
      << fmt_real(m.Q) << ',' << fmt_real(m.Q_tilde) << ',' << fmt_real(m.Gamma0) << ','
      << fmt_real(m.omega) << ',' << fmt_real(tau0) << ',' << ladder << ','
      << fmt_real(m.transversality) << '\n';
  }
}

void echo_normal_form(Summary& s, const NormalForm& nf) {
  s.section("normal_form");
  const auto c = [&](const std::string& k, cplx z) {
    s.add(k + "_re", z.real());
    s.add(k + "_im", z.imag());
  };
  c("B1", nf.B1);
  c("B21", nf.B21);
  c("B22", nf.B22);
  c("B23", nf.B23);
  c("B2", nf.B2);
  s.add("K1", nf.K1);
  s.add("K2", nf.K2);
  s.add("K1K2", nf.K1 * nf.K2);
  s.add("classification", classification(nf));
}

fs::path prepare(const fs::path& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw Error(ErrorCode::InvalidArgument, "cannot create " + out.string() + ": " + ec.message());
  return out;
}

}  // namespace

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::ConfigError:
    case ErrorCode::InvalidArgument: return kExitConfig;
    case ErrorCode::InsufficientData:
    case ErrorCode::VerdictFailure: return kExitUndecided;
    default: return kExitNumerical;
  }
}

fs::path resolve_output_dir(const std::optional<std::string>& cli_out, const RunConfig& cfg) {
  if (cli_out && !cli_out->empty()) return *cli_out;
  if (const char* env = std::getenv("MEMTAXIS_OUT"); env && *env) return env;
  if (cfg.output_dir && !cfg.output_dir->empty()) return *cfg.output_dir;
  return ".";
}

int cmd_analyze(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  prepare(out);
  const Analysis a = analyze(cfg.kin, cfg.tr, cfg.n_max, cfg.j_max);
  write_analysis_csv(out, a.report);
  Summary s;
  echo_inputs(s, cfg);
  echo_analysis(s, a);
  s.emit(out, log);
  return kExitOk;
}

int cmd_normal_form(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  prepare(out);
  const Analysis a = analyze(cfg.kin, cfg.tr, cfg.n_max, cfg.j_max);
  write_analysis_csv(out, a.report);
  Summary s;
  echo_inputs(s, cfg);
  echo_analysis(s, a);
  if (a.report.regime != Regime::DelayHopf) {
    s.section("normal_form");
    s.add("result", "no Hopf point (regime " + to_string(a.report.regime) + ")");
    s.emit(out, log);
    return kExitOk;
  }
  const HopfPoint& hp = a.report.hopf_points.front();
  const NormalForm nf = normal_form(hp, a.lin, cfg.tr, kinetic_taylor(cfg.kin, a.steady, hp.tau_c));
  echo_normal_form(s, nf);
  s.emit(out, log);
  return kExitOk;
}

int cmd_simulate(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  if (!cfg.delay.tau) throw Error(ErrorCode::ConfigError, cfg.source + ": simulate needs [delay] tau");
  prepare(out);

  // The mode used for detection comes from the analysis when it finds a Hopf point.
  int n_c = cfg.sim.ic_mode > 0 ? cfg.sim.ic_mode : 1;
  std::string analysis_note;
  try {
    const Analysis a = analyze(cfg.kin, cfg.tr, cfg.n_max, cfg.j_max);
    if (a.report.regime == Regime::DelayHopf) n_c = a.report.hopf_points.front().n_c;
  } catch (const Error& e) {
    analysis_note = e.what();
  }

  SimConfig sc;
  sc.kin = cfg.kin;
  sc.tr = cfg.tr;
  sc.tau = *cfg.delay.tau;
  sc.n_cells = cfg.sim.n_cells;
  sc.dt = cfg.sim.dt;
  sc.t_end = cfg.sim.t_end;
  sc.ic = {cfg.sim.ic_mode >= 0 ? cfg.sim.ic_mode : n_c, cfg.sim.ic_amplitude_u,
           cfg.sim.ic_amplitude_v};
  sc.probe_x = cfg.sim.probe_x.value_or(0.0);
  const double dt = resolved_dt(sc);
  sc.record_every = std::max(1, static_cast<int>(std::lround(cfg.sim.record_interval / dt)));
  sc.trace_every = std::max(1, static_cast<int>(std::lround(cfg.sim.trace_interval / dt)));

  const Trajectory traj = run(sc);
  const int modes = std::min(cfg.sim.spectrum_modes, traj.grid.n_cells / 4);
  n_c = std::min(n_c, modes);
  DetectOptions opt = cfg.detect;
  opt.spectrum_modes = modes;

  PeriodEstimate est;
  std::string detect_note;
  try {
    est = detect(traj, traj.steady, n_c, opt);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InsufficientData) throw;
    est.verdict = Verdict::Undecided;
    est.steady_deviation = steady_deviation(traj, traj.steady);
    detect_note = e.what();
  }

  {
    const int stride = static_cast<int>((traj.snapshots.size() + cfg.sim.snapshot_limit - 1) /
                                        static_cast<std::size_t>(cfg.sim.snapshot_limit));
    auto f = open_output(out / "snapshots.csv");
    write_snapshots(f, traj, stride);
  }
  {
    auto f = open_output(out / "probe.csv");
    write_probe(f, traj);
  }
  {
    auto f = open_output(out / "spectrum.csv");
    write_spectrum(f, spectrum(traj, modes));
  }
  {
    auto f = open_output(out / "verdict.csv");
    write_verdict(f, est, n_c);
  }

  Summary s;
  echo_inputs(s, cfg);
  s.section("simulation");
  s.add("n_cells", traj.grid.n_cells);
  s.add("dt", traj.dt);
  s.add("delay_steps", traj.delay_steps);
  s.add("t_end", traj.times.back());
  s.add("ic_mode", sc.ic.mode);
  s.add("ic_amplitude_u", sc.ic.amp_u);
  s.add("ic_amplitude_v", sc.ic.amp_v);
  s.add("probe_x", traj.grid.x(traj.probe_cell));
  s.add("cfl_bound", cfl_bound(cfg.kin, cfg.tr, traj.grid));
  if (!analysis_note.empty()) s.add("analysis_note", analysis_note);
  s.section("verdict");
  s.add("n_c", n_c);
  s.add("verdict", to_string(est.verdict));
  s.add("period", est.period);
  s.add("amplitude", est.amplitude);
  s.add("relative_spacing_std", est.relative_spacing_std);
  s.add("amplitude_drift", est.amplitude_drift);
  s.add("dominant_mode", est.dominant_mode);
  s.add("steady_deviation", est.steady_deviation);
  s.add("peak_count", est.peak_count);
  if (!detect_note.empty()) s.add("detect_note", detect_note);
  s.emit(out, log);
  return est.verdict == Verdict::Undecided ? kExitUndecided : kExitOk;
}

namespace {

struct SweepRow {
  double ell = 0;
  double tau = 0;
  std::string line;
  bool failed = false;
};

std::string sweep_row(const RunConfig& cfg, double ell, double tau, bool& failed) {
  std::ostringstream os;
  os << fmt_real(ell) << ',' << fmt_real(tau) << ',';
  try {
    TransportParams tr = cfg.tr;
    tr.ell = ell;
    const Analysis a = analyze(cfg.kin, tr, cfg.n_max, cfg.j_max);
    const StabilityReport& r = a.report;
    std::string nf_cols = ",,,";
    int n_c = -1;
    std::optional<double> omega;
    if (r.regime == Regime::DelayHopf) {
      const HopfPoint& hp = r.hopf_points.front();
      n_c = hp.n_c;
      omega = hp.omega_nc;
      if (cfg.sweep_normal_form) {
        const NormalForm nf =
            normal_form(hp, a.lin, tr, kinetic_taylor(cfg.kin, a.steady, hp.tau_c));
        nf_cols = fmt_real(nf.K1) + ',' + fmt_real(nf.K2) + ',' + fmt_real(nf.K1 * nf.K2) + ',' +
                  csv_field(classification(nf));
      }
    }
    os << to_string(r.regime) << ',' << (r.stable_at(tau) ? 1 : 0) << ','
       << fmt_real(r.tau_star) << ',' << (n_c >= 0 ? std::to_string(n_c) : std::string()) << ','
       << fmt_real(omega) << ',' << nf_cols << ",\n";
  } catch (const Error& e) {
    os << ",,,,,,,,," << csv_field(e.what()) << '\n';
    failed = true;
  }
  return os.str();
}

}  // namespace

int cmd_sweep(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  const std::vector<double> taus = cfg.delay.grid();
  if (taus.empty()) {
    throw Error(ErrorCode::ConfigError, cfg.source + ": sweep needs [delay] tau or tau_min/tau_max/tau_points");
  }
  const std::vector<double> ells = cfg.ell_values.empty() ? std::vector<double>{cfg.tr.ell}
                                                          : cfg.ell_values;
  prepare(out);
  std::vector<SweepRow> rows;
  for (double ell : ells) {
    for (double tau : taus) rows.push_back({ell, tau, {}});
  }

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      rows[i].line = sweep_row(cfg, rows[i].ell, rows[i].tau, rows[i].failed);
    }
  };
  const int n_threads = std::min<int>(cfg.workers, static_cast<int>(rows.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  auto f = open_output(out / "sweep.csv");
  f << "ell,tau,regime,stable,tau_star,n_c,omega_nc,K1,K2,K1K2,classification,error\n";
  int failed = 0;
  for (const SweepRow& r : rows) {
    f << r.line;
    failed += r.failed ? 1 : 0;
  }
  Summary s;
  echo_inputs(s, cfg);
  s.section("sweep");
  s.add("rows", static_cast<int>(rows.size()));
  s.add("tau_points", static_cast<int>(taus.size()));
  s.add("ell_points", static_cast<int>(ells.size()));
  s.add("failed_rows", failed);
  s.emit(out, log);
  return kExitOk;
}

int run_command(const std::string& name, const RunConfig& cfg, const fs::path& out,
                std::ostream& log, std::ostream& err) {
  try {
    if (name == "analyze") return cmd_analyze(cfg, out, log);
    if (name == "normal-form") return cmd_normal_form(cfg, out, log);
    if (name == "simulate") return cmd_simulate(cfg, out, log);
    if (name == "sweep") return cmd_sweep(cfg, out, log);
    err << "unknown command '" << name << "'\n";
    return kExitConfig;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return exit_code_for(e);
  }
}

}  // namespace memtaxis
