// Acceptance driver: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <string>

#include "memtaxis/diagnostics.hpp"
#include "memtaxis/errors.hpp"
#include "memtaxis/linear.hpp"
#include "memtaxis/normalform.hpp"
#include "memtaxis/simulator.hpp"
#include "oracles.hpp"

using namespace memtaxis;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
    }
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string num(double x) {
  char b[64];
  std::snprintf(b, sizeof b, "%.6g", x);
  return b;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Setup {
  KineticParams kin = oracle::base_kin();
  TransportParams tr;
  SteadyState ss;
  Linearization lin;
  StabilityReport rep;
};

Setup baseline(double ell) {
  Setup s;
  s.tr = oracle::base_tr(ell);
  s.ss = steady_state(s.kin);
  s.lin = linearize(s.kin, s.tr, s.ss);
  s.rep = classify(s.lin, s.tr);
  return s;
}

Outcome criterion1() {
  Outcome o;
  const SteadyState ss = steady_state(oracle::base_kin());
  const auto lin = linearize(oracle::base_kin(), oracle::base_tr(2), ss);
  o.require(std::abs(ss.u_star - 1.4142) <= 5e-5 && std::abs(ss.v_star - 1.4142) <= 5e-5, "u*=v*");
  o.require(std::abs(lin.a11 + 0.5355) <= 5e-5, "a11");
  o.require(std::abs(lin.a12 + 0.2929) <= 5e-5, "a12");
  o.require(std::abs(lin.a21 - 0.8) <= 5e-5, "a21");
  o.require(std::abs(lin.a22 + 0.8) <= 5e-5, "a22");
  o.note("u*=" + num(ss.u_star) + " a11=" + num(lin.a11) + " a12=" + num(lin.a12) +
         " a21=" + num(lin.a21) + " a22=" + num(lin.a22));
  return o;
}

Outcome criterion2() {
  Outcome o;
  const double want[2][2] = {{0.8776, 1.8935}, {1.3164, 2.8403}};
  for (int i = 0; i < 2; ++i) {
    const Setup s = baseline(i == 0 ? 2.0 : 3.0);
    const auto& w = s.rep.window;
    const bool have = w.n1 && w.n2;
    o.require(have, "window exists");
    if (!have) continue;
    o.require(std::abs(*w.n1 - want[i][0]) <= 5e-5 && std::abs(*w.n2 - want[i][1]) <= 5e-5,
              "window ell=" + num(s.tr.ell));
    o.note("ell=" + num(s.tr.ell) + " (" + num(*w.n1) + ", " + num(*w.n2) + ")");
  }
  return o;
}

Outcome criterion3() {
  Outcome o;
  const Setup s2 = baseline(2), s3 = baseline(3);
  const HopfPoint h2 = s2.rep.hopf_points.at(0), h3 = s3.rep.hopf_points.at(0);
  o.require(h2.n_c == 1 && h3.n_c == 2, "critical modes");
  o.require(std::abs(h2.omega_nc - 0.418) <= 5e-4 && std::abs(h2.tau_c - 6.1498) <= 5e-4, "ell=2");
  o.require(std::abs(h3.omega_nc - 0.6870) <= 5e-5 && std::abs(h3.tau_c - 3.5361) <= 5e-4, "ell=3");
  double worst = 0;
  for (const Setup* s : {&s2, &s3}) {
    for (const ModeAnalysis& m : s->rep.modes) {
      if (!m.omega) continue;
      for (double tau : m.tau_ladder) {
        worst = std::max(worst, std::abs(characteristic_residual({0.0, *m.omega}, tau, m.n,
                                                                 s->lin, s->tr)));
      }
    }
  }
  o.require(worst < 1e-8, "characteristic residual");
  o.note("omega1=" + num(h2.omega_nc) + " tau10=" + num(h2.tau_c) + " omega2=" + num(h3.omega_nc) +
         " tau20=" + num(h3.tau_c) + " max residual=" + num(worst));
  return o;
}

Outcome criterion4() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  NormalForm nf[2];
  for (int i = 0; i < 2; ++i) {
    const Setup s = baseline(i == 0 ? 2.0 : 3.0);
    const HopfPoint& hp = s.rep.hopf_points.at(0);
    nf[i] = normal_form(hp, s.lin, s.tr, kinetic_taylor(s.kin, s.ss, hp.tau_c));
  }
  const double elapsed = seconds_since(t0);
  const auto stable = [](const NormalForm& n) {
    return n.direction == Direction::Supercritical && n.orbit_stability == OrbitStability::Stable;
  };
  o.require(std::abs(nf[0].K1 - 0.016) <= 1e-3 && std::abs(nf[0].K2 + 0.9283) <= 5e-3 &&
                std::abs(nf[0].K1 * nf[0].K2 + 0.0148) <= 5e-4,
            "ell=2 K values");
  o.require(std::abs(nf[1].K1 - 0.0410) <= 1e-3 && std::abs(nf[1].K2 + 1.3669) <= 7e-3 &&
                std::abs(nf[1].K1 * nf[1].K2 + 0.0561) <= 1e-3,
            "ell=3 K values");
  o.require(stable(nf[0]) && stable(nf[1]), "supercritical, stable");
  o.require(elapsed < 1.0, "runtime");
  o.note("ell=2 K1=" + num(nf[0].K1) + " K2=" + num(nf[0].K2) + "; ell=3 K1=" + num(nf[1].K1) +
         " K2=" + num(nf[1].K2) + "; " + num(elapsed) + " s");
  return o;
}

struct SimResult {
  PeriodEstimate est;
  double seconds = 0;
  std::string error;
};

SimResult simulate(double ell, double tau, int n_cells, double t_end) {
  const Setup s = baseline(ell);
  const int n_c = s.rep.hopf_points.at(0).n_c;
  SimConfig c;
  c.kin = s.kin;
  c.tr = s.tr;
  c.tau = tau;
  c.n_cells = n_cells;
  c.t_end = t_end;
  c.ic = {n_c, -0.1, 0.1};
  c.record_every = std::max(1, static_cast<int>(std::lround(0.25 / resolved_dt(c))));
  c.trace_every = c.record_every;
  SimResult r;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const Trajectory traj = run(c);
    r.est = detect(traj, traj.steady, n_c);
  } catch (const Error& e) {
    r.error = e.what();
  }
  r.seconds = seconds_since(t0);
  return r;
}

Outcome criterion5() {
  Outcome o;
  struct Run {
    double ell, tau;
    Verdict want;
    int mode;
  };
  const Run runs[] = {{2, 3, Verdict::ConvergedToSteady, 0},
                      {3, 2, Verdict::ConvergedToSteady, 0},
                      {2, 8, Verdict::Periodic, 1},
                      {3, 6, Verdict::Periodic, 2}};
  for (const Run& r : runs) {
    const SimResult s = simulate(r.ell, r.tau, 200, 2000);
    const std::string tag = "ell=" + num(r.ell) + " tau=" + num(r.tau);
    if (!s.error.empty()) {
      o.require(false, tag + " " + s.error);
      continue;
    }
    o.require(s.est.verdict == r.want, tag + " verdict " + to_string(s.est.verdict));
    if (r.mode > 0) o.require(s.est.dominant_mode == r.mode, tag + " dominant mode");
    o.require(s.seconds <= 300, tag + " runtime");
    o.note(tag + ": " + to_string(s.est.verdict) +
           (r.mode > 0 ? " mode " + std::to_string(s.est.dominant_mode) + " period " + num(s.est.period)
                       : " dev " + num(s.est.steady_deviation)) +
           " (" + num(s.seconds) + " s)");
  }
  return o;
}

Outcome criterion6() {
  Outcome o;
  const Setup s = baseline(2);
  const HopfPoint hp = s.rep.hopf_points.at(0);
  const NormalForm nf = normal_form(hp, s.lin, s.tr, kinetic_taylor(s.kin, s.ss, hp.tau_c));
  const double linear_period = 2 * std::numbers::pi / hp.omega_nc;
  const int n_cells = 100;
  const double t_end = 8000;

  const SimResult near = simulate(2, hp.tau_c + 0.3, n_cells, t_end);
  if (!near.error.empty() || near.est.verdict != Verdict::Periodic) {
    o.require(false, "tau_c+0.3 run not periodic " + near.error);
  } else {
    const double gap = std::abs(near.est.period / linear_period - 1.0);
    o.require(gap <= 0.10, "period within 10%");
    o.note("period " + num(near.est.period) + " vs " + num(linear_period) + " (" +
           num(100 * gap) + "%)");
  }

  const double mu = 0.1;
  const SimResult a = simulate(2, hp.tau_c + mu, n_cells, t_end);
  const SimResult b = simulate(2, hp.tau_c + 4 * mu, n_cells, t_end);
  try {
    if (!a.error.empty() || !b.error.empty()) throw Error(ErrorCode::VerdictFailure, a.error + b.error);
    const ScalingReport r = scaling_check(a.est, mu, b.est, 4 * mu, nf);
    o.require(r.ratio >= 1.7 && r.ratio <= 2.3, "amplitude ratio in [1.7, 2.3]");
    o.note("amplitudes " + num(r.amplitude1) + ", " + num(r.amplitude2) + " ratio " + num(r.ratio));
    if (r.predicted1 && r.predicted2) {
      o.note("normal-form 2rho* " + num(*r.predicted1) + ", " + num(*r.predicted2) +
             " log10 gaps " + num(*r.magnitude_gap1) + ", " + num(*r.magnitude_gap2));
    }
  } catch (const Error& e) {
    o.require(false, e.what());
  }
  return o;
}

// Compact versions of the property suites.
Outcome criterion7() {
  Outcome o;
  const auto rel = [](cplx x, cplx y) { return std::abs(x - y) / std::max(1.0, std::abs(y)); };
  double conj_gauge = 0, h_res = 0, fd = 0;
  for (double ell : {2.0, 3.0}) {
    const Setup s = baseline(ell);
    const HopfPoint hp = s.rep.hopf_points.at(0);
    const KineticTaylor kt = kinetic_taylor(s.kin, s.ss, hp.tau_c);
    const NormalForm nf = normal_form(hp, s.lin, s.tr, kt);
    const NormalForm c = normal_form(nf.eigen.conjugated(), hp, s.lin, s.tr, kt);
    for (auto [x, y] : {std::pair{c.B1, nf.B1}, {c.B21, nf.B21}, {c.B22, nf.B22}, {c.B23, nf.B23}}) {
      conj_gauge = std::max(conj_gauge, rel(x, std::conj(y)));
    }
    for (double alpha : {0.3, 1.7, -2.9}) {
      const NormalForm g = normal_form(nf.eigen.rotated(alpha), hp, s.lin, s.tr, kt);
      for (auto [x, y] : {std::pair{g.B1, nf.B1}, {g.B21, nf.B21}, {g.B22, nf.B22}, {g.B23, nf.B23}}) {
        conj_gauge = std::max(conj_gauge, rel(x, y));
      }
    }
    for (double r : center_manifold_residuals(nf.h, nf.tensors, nf.eigen, hp, s.lin, s.tr)) {
      h_res = std::max(h_res, r);
    }
    const auto F = oracle::scaled_kinetics(s.kin, hp.tau_c);
    const oracle::R2 x{s.ss.u_star, s.ss.v_star};
    const CVec2 phi = nf.eigen.phi;
    const auto fd_rel = [](const CVec2& got, const CVec2& want) {
      return max_abs(got - want) / std::max(1.0, max_abs(want));
    };
    fd = std::max({fd, fd_rel(nf.tensors.A20, oracle::d2_complex(F, x, phi, phi, 1e-3)),
                   fd_rel(nf.tensors.A11, 2.0 * oracle::d2_complex(F, x, phi, conj(phi), 1e-3)),
                   fd_rel(nf.tensors.A21, 3.0 * oracle::d3_aab(F, x, phi, 1e-2))});
  }
  o.require(conj_gauge < 1e-10, "conjugate/gauge");
  o.require(h_res < 1e-9, "h residuals");
  o.require(fd < 1e-5, "tensor FD oracle");

  // Transport-only mass conservation.
  double mass_step = 0;
  {
    SimConfig c;
    c.kin = oracle::base_kin();
    c.tr = oracle::base_tr(2);
    c.tau = 3;
    c.n_cells = 64;
    c.t_end = 1;
    c.kinetics = false;
    c.ic = {3, 0.3, -0.2};
    DelayIntegrator integ(c, kernels::active_table());
    const auto mass = [&](const double* p) { return std::accumulate(p, p + 64, 0.0); };
    double mu = mass(integ.u()), mv = mass(integ.v());
    for (int k = 0; k < 2000; ++k) {
      integ.step();
      const double nu = mass(integ.u()), nv = mass(integ.v());
      mass_step = std::max({mass_step, std::abs(nu - mu) / mu, std::abs(nv - mv) / mv});
      mu = nu;
      mv = nv;
    }
  }
  o.require(mass_step <= 1e-12, "mass conservation");

  // Spatial convergence against a fine reference.
  double ratio = 0;
  {
    SimConfig c;
    c.kin = oracle::base_kin();
    c.tr = oracle::base_tr(2);
    c.tau = 3;
    c.t_end = 10;
    c.n_cells = 512;
    c.dt = stable_dt(c.tr, Grid::make(512, 2.0));
    const auto final_state = [](const SimConfig& cfg) {
      DelayIntegrator integ(cfg, kernels::active_table());
      const auto steps = std::llround(cfg.t_end / integ.dt());
      for (long long k = 0; k < steps; ++k) integ.step();
      return integ.state();
    };
    const FieldPair ref = final_state(c);
    double err[2];
    for (int i = 0; i < 2; ++i) {
      c.n_cells = i == 0 ? 32 : 64;
      const FieldPair s = final_state(c);
      const int r = 512 / c.n_cells;
      err[i] = 0;
      for (int j = 0; j < c.n_cells; ++j) {
        const int a = j * r + r / 2 - 1;
        err[i] = std::max({err[i], std::abs(s.u[j] - 0.5 * (ref.u[a] + ref.u[a + 1])),
                           std::abs(s.v[j] - 0.5 * (ref.v[a] + ref.v[a + 1]))});
      }
    }
    ratio = err[0] / err[1];
  }
  o.require(ratio >= 3.2 && ratio <= 4.8, "spatial convergence ratio");

  // Uniform state against the kinetic ODE.
  double uniform = 0;
  {
    SimConfig c;
    c.kin = oracle::base_kin();
    c.tr = oracle::base_tr(2);
    c.tau = 3;
    c.n_cells = 16;
    c.t_end = 50;
    c.ic = {0, 0.3, -0.2};
    c.record_every = static_cast<int>(std::lround(1.0 / resolved_dt(c)));
    const Trajectory t = run(c);
    const auto ref = oracle::kinetic_ode(c.kin, t.steady.u_star + 0.3, t.steady.v_star - 0.2, t.times);
    for (std::size_t k = 0; k < ref.size(); ++k) {
      for (int i = 0; i < 16; ++i) {
        uniform = std::max({uniform, std::abs(t.snapshots[k].u[i] - ref[k][0]),
                            std::abs(t.snapshots[k].v[i] - ref[k][1])});
      }
    }
  }
  o.require(uniform < 1e-6, "uniform-state DDE equivalence");

  // Transversality sign on random draws in the one-root case.
  int accepted = 0, agree = 0;
  {
    std::mt19937_64 rng(97531);
    for (int attempts = 0; accepted < 50 && attempts < 2000; ++attempts) {
      const auto d = oracle::random_draw(rng);
      const auto lin = linearize(d.kin, d.tr, steady_state(d.kin));
      if (!condition_c0(lin)) continue;
      StabilityReport rep;
      try {
        rep = classify(lin, d.tr);
      } catch (const Error&) {
        continue;
      }
      if (rep.regime != Regime::DelayHopf) continue;
      const HopfPoint hp = rep.hopf_points.front();
      const auto& ma = rep.modes.at(static_cast<std::size_t>(hp.n_c));
      const auto vel = oracle::root_velocity(hp.tau_c, hp.omega_nc, hp.n_c, lin, d.tr);
      ++accepted;
      if (vel && ma.transversality && std::signbit(vel->real()) == std::signbit(*ma.transversality)) {
        ++agree;
      }
    }
  }
  o.require(accepted == 50 && agree == 50, "transversality sign");

  o.note("B conj/gauge " + num(conj_gauge) + ", h residual " + num(h_res) + ", FD " + num(fd) +
         ", mass/step " + num(mass_step) + ", space ratio " + num(ratio) + ", uniform " +
         num(uniform) + ", transversality " + std::to_string(agree) + "/" + std::to_string(accepted));
  return o;
}

Outcome criterion8() {
  Outcome o;
  TransportParams tr = oracle::base_tr(2);
  tr.d21 = 0;
  const auto kin = oracle::base_kin();
  const auto lin0 = linearize(kin, tr, steady_state(kin));
  o.require(classify(lin0, tr).regime == Regime::StableAllTau, "d21=0 StableAllTau");

  bool mode0 = true;
  double spacing = 0;
  std::mt19937_64 rng(4242);
  for (int i = 0; i < 50; ++i) {
    const auto d = i < 2 ? oracle::Draw{kin, oracle::base_tr(i == 0 ? 2.0 : 3.0)} : oracle::random_draw(rng);
    const auto lin = linearize(d.kin, d.tr, steady_state(d.kin));
    if (!condition_c0(lin)) continue;
    StabilityReport rep;
    try {
      rep = classify(lin, d.tr, 8, 4);
    } catch (const Error&) {
      continue;
    }
    for (const HopfPoint& hp : rep.hopf_points) mode0 = mode0 && hp.n_c != 0;
    mode0 = mode0 && rep.modes.at(0).root_case != RootCase::OneRoot;
    for (const ModeAnalysis& m : rep.modes) {
      if (!m.omega) continue;
      const double step = 2 * std::numbers::pi / *m.omega;
      for (std::size_t j = 1; j < m.tau_ladder.size(); ++j) {
        spacing = std::max(spacing, std::abs((m.tau_ladder[j] - m.tau_ladder[j - 1]) / step - 1.0));
      }
    }
  }
  o.require(mode0, "mode 0 never Hopf");
  o.require(spacing <= 1e-10, "ladder spacing");
  o.note("max relative ladder spacing error " + num(spacing));
  return o;
}

}  // namespace

int main() {
  const std::function<Outcome()> criteria[] = {criterion1, criterion2, criterion3, criterion4,
                                               criterion5, criterion6, criterion7, criterion8};
  int failures = 0;
  for (int i = 0; i < 8; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o.require(false, e.what());
    }
    std::printf("criterion %d: %s (%.1f s) %s\n", i + 1, o.ok ? "PASS" : "FAIL", seconds_since(t0),
                o.detail.c_str());
    std::fflush(stdout);
    failures += o.ok ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
