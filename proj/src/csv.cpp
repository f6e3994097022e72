#include "memtaxis/csv.hpp"

#include <cstdio>
#include <fstream>

#include "memtaxis/errors.hpp"

namespace memtaxis {

std::string fmt_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_real(const std::optional<double>& x) { return x ? fmt_real(*x) : std::string(); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_snapshots(std::ostream& os, const Trajectory& traj, int stride) {
  os << "t,x,u,v\n";
  stride = std::max(stride, 1);
  for (std::size_t k = 0; k < traj.snapshots.size(); k += static_cast<std::size_t>(stride)) {
    const FieldPair& f = traj.snapshots[k];
    const std::string t = fmt_real(traj.times[k]);
    for (int i = 0; i < traj.grid.n_cells; ++i) {
      os << t << ',' << fmt_real(traj.grid.x(i)) << ',' << fmt_real(f.u[i]) << ','
         << fmt_real(f.v[i]) << '\n';
    }
  }
}

void write_probe(std::ostream& os, const Trajectory& traj) {
  os << "t,u_probe,v_probe\n";
  for (std::size_t k = 0; k < traj.trace_t.size(); ++k) {
    os << fmt_real(traj.trace_t[k]) << ',' << fmt_real(traj.probe_u[k]) << ','
       << fmt_real(traj.probe_v[k]) << '\n';
  }
}

void write_spectrum(std::ostream& os, const ModeSpectrum& sp) {
  os << "t,n,a_u,a_v\n";
  for (std::size_t k = 0; k < sp.times.size(); ++k) {
    const std::string t = fmt_real(sp.times[k]);
    for (int n = 0; n <= sp.n_max; ++n) {
      os << t << ',' << n << ',' << fmt_real(sp.a_u[k][n]) << ',' << fmt_real(sp.a_v[k][n])
         << '\n';
    }
  }
}

void write_verdict(std::ostream& os, const PeriodEstimate& est, int n_c) {
  os << "verdict,period,amplitude,relative_spacing_std,amplitude_drift,dominant_mode,"
        "steady_deviation,peak_count,n_c\n";
  os << to_string(est.verdict) << ',' << fmt_real(est.period) << ',' << fmt_real(est.amplitude)
     << ',' << fmt_real(est.relative_spacing_std) << ',' << fmt_real(est.amplitude_drift) << ','
     << est.dominant_mode << ',' << fmt_real(est.steady_deviation) << ',' << est.peak_count
     << ',' << n_c << '\n';
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  return f;
}

}  // namespace memtaxis
