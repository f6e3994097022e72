#include "memtaxis/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "memtaxis/errors.hpp"

namespace memtaxis {

namespace {

std::vector<double> sampled_basis(const Grid& grid, int n) {
  std::vector<double> b(grid.n_cells);
  for (int i = 0; i < grid.n_cells; ++i) b[i] = basis(n, grid.x(i), grid.ell) * grid.dx;
  return b;
}

void check_resolution(const Grid& grid, int n) {
  if (n < 0 || n > grid.n_cells / 4) {
    throw Error(ErrorCode::InvalidArgument,
                "mode " + std::to_string(n) + " not resolved by " +
                    std::to_string(grid.n_cells) + " cells");
  }
}

double mean(const std::vector<double>& x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double centered_dot(const std::vector<double>& f, double fbar, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < f.size(); ++i) s += (f[i] - fbar) * b[i];
  return s;
}

std::size_t first_at_or_after(const std::vector<double>& t, double t0) {
  return static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), t0) - t.begin());
}

}  // namespace

double basis(int n, double x, double ell) {
  const double length = ell * std::numbers::pi;
  if (n == 0) return 1.0 / std::sqrt(length);
  return std::sqrt(2.0 / length) * std::cos(n * x / ell);
}

std::pair<double, double> project(const FieldPair& field, const Grid& grid, int n) {
  check_resolution(grid, n);
  const auto b = sampled_basis(grid, n);
  return {centered_dot(field.u, 0.0, b), centered_dot(field.v, 0.0, b)};
}

ModeSpectrum spectrum(const Trajectory& traj, int n_max) {
  check_resolution(traj.grid, n_max);
  std::vector<std::vector<double>> bases;
  for (int n = 0; n <= n_max; ++n) bases.push_back(sampled_basis(traj.grid, n));

  ModeSpectrum sp;
  sp.n_max = n_max;
  sp.times = traj.times;
  for (const FieldPair& f : traj.snapshots) {
    const double ubar = mean(f.u);
    const double vbar = mean(f.v);
    std::vector<double> au(n_max + 1), av(n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
      au[n] = centered_dot(f.u, ubar, bases[n]);
      av[n] = centered_dot(f.v, vbar, bases[n]);
    }
    sp.a_u.push_back(std::move(au));
    sp.a_v.push_back(std::move(av));
  }
  return sp;
}

std::vector<double> mode_trace(const Trajectory& traj, int n) {
  check_resolution(traj.grid, n);
  const auto b = sampled_basis(traj.grid, n);
  std::vector<double> out;
  out.reserve(traj.snapshots.size());
  for (const FieldPair& f : traj.snapshots) out.push_back(centered_dot(f.u, mean(f.u), b));
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Periodic: return "Periodic";
    case Verdict::ConvergedToSteady: return "ConvergedToSteady";
    case Verdict::Undecided: return "Undecided";
  }
  return "Unknown";
}

std::vector<Peak> find_peaks(const std::vector<double>& t, const std::vector<double>& y,
                             double level) {
  std::vector<Peak> peaks;
  bool armed = true;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    if (y[i] < level) armed = true;
    if (!armed || !(y[i] > y[i - 1] && y[i] >= y[i + 1]) || y[i] <= level) continue;
    const double curv = y[i - 1] - 2.0 * y[i] + y[i + 1];
    double delta = 0;
    if (curv < 0) delta = std::clamp(0.5 * (y[i - 1] - y[i + 1]) / curv, -0.5, 0.5);
    const double h = delta < 0 ? t[i] - t[i - 1] : t[i + 1] - t[i];
    peaks.push_back({t[i] + delta * h, y[i] - 0.25 * (y[i - 1] - y[i + 1]) * delta});
    armed = false;
  }
  return peaks;
}

PeriodEstimate detect_trace(const std::vector<double>& t, const std::vector<double>& y,
                            double steady_dev, const DetectOptions& opt) {
  if (t.size() != y.size() || t.size() < 3) {
    throw Error(ErrorCode::InsufficientData, "trace needs at least three samples");
  }
  PeriodEstimate est;
  est.steady_deviation = steady_dev;
  if (steady_dev < opt.steady_tol) {
    est.verdict = Verdict::ConvergedToSteady;
    return est;
  }

  const double cut = t.front() + opt.transient_fraction * (t.back() - t.front());
  const std::size_t i0 = first_at_or_after(t, cut);
  const std::vector<double> tw(t.begin() + i0, t.end());
  const std::vector<double> yw(y.begin() + i0, y.end());
  if (yw.size() < 3) throw Error(ErrorCode::InsufficientData, "no samples after transient cut");
  const double level = mean(yw);
  std::vector<double> neg(yw.size());
  std::transform(yw.begin(), yw.end(), neg.begin(), [](double a) { return -a; });

  const auto peaks = find_peaks(tw, yw, level);
  const auto troughs = find_peaks(tw, neg, -level);
  est.peak_count = static_cast<int>(peaks.size());
  if (est.peak_count < opt.min_peaks || troughs.empty()) {
    throw Error(ErrorCode::InsufficientData,
                std::to_string(peaks.size()) + " peaks after the transient cut, need " +
                    std::to_string(opt.min_peaks));
  }

  const std::size_t w = static_cast<std::size_t>(opt.window_peaks);
  const std::vector<Peak> last(peaks.end() - static_cast<long>(w), peaks.end());
  const std::size_t nt = std::min(w, troughs.size());
  const std::vector<Peak> last_t(troughs.end() - static_cast<long>(nt), troughs.end());

  std::vector<double> spacing;
  for (std::size_t i = 1; i < last.size(); ++i) spacing.push_back(last[i].t - last[i - 1].t);
  const double sm = mean(spacing);
  double var = 0;
  for (double s : spacing) var += (s - sm) * (s - sm);
  var /= static_cast<double>(spacing.size());
  est.period = sm;
  est.relative_spacing_std = std::sqrt(var) / sm;

  double hi = 0, lo = 0;
  for (const Peak& p : last) hi += p.value;
  for (const Peak& p : last_t) lo -= p.value;
  hi /= static_cast<double>(last.size());
  lo /= static_cast<double>(last_t.size());
  est.amplitude = 0.5 * (hi - lo);

  const double first_h = last.front().value - level;
  const double last_h = last.back().value - level;
  est.amplitude_drift = est.amplitude > 0 ? std::abs(last_h - first_h) / est.amplitude
                                          : std::numeric_limits<double>::infinity();

  const bool periodic = est.relative_spacing_std < opt.spacing_tol &&
                        est.amplitude_drift < opt.drift_tol && est.amplitude > 0;
  est.verdict = periodic ? Verdict::Periodic : Verdict::Undecided;
  return est;
}

double steady_deviation(const Trajectory& traj, const SteadyState& steady) {
  if (traj.snapshots.empty()) throw Error(ErrorCode::InsufficientData, "empty trajectory");
  const FieldPair& f = traj.snapshots.back();
  double dev = 0;
  for (std::size_t i = 0; i < f.u.size(); ++i) {
    dev = std::max({dev, std::abs(f.u[i] - steady.u_star), std::abs(f.v[i] - steady.v_star)});
  }
  return dev;
}

int dominant_mode(const Trajectory& traj, int n_max, double t_from) {
  n_max = std::min(n_max, traj.grid.n_cells / 4);
  const ModeSpectrum sp = spectrum(traj, n_max);
  const std::size_t i0 = first_at_or_after(sp.times, t_from);
  int best = -1;
  double best_rms = -1;
  for (int n = 1; n <= n_max; ++n) {
    double s = 0;
    for (std::size_t i = i0; i < sp.times.size(); ++i) s += sp.a_u[i][n] * sp.a_u[i][n];
    if (s > best_rms) {
      best_rms = s;
      best = n;
    }
  }
  return best;
}

PeriodEstimate detect(const Trajectory& traj, const SteadyState& steady, int n_c,
                      const DetectOptions& opt) {
  const double dev = steady_deviation(traj, steady);
  PeriodEstimate est = detect_trace(traj.times, mode_trace(traj, n_c), dev, opt);
  if (est.verdict != Verdict::ConvergedToSteady) {
    const double cut = traj.times.front() +
                       opt.transient_fraction * (traj.times.back() - traj.times.front());
    est.dominant_mode = dominant_mode(traj, opt.spectrum_modes, cut);
  }
  return est;
}

ScalingReport scaling_check(const PeriodEstimate& run1, double mu1, const PeriodEstimate& run2,
                            double mu2, const NormalForm& nf, double tolerance) {
  if (run1.verdict != Verdict::Periodic || run2.verdict != Verdict::Periodic) {
    throw Error(ErrorCode::VerdictFailure, "scaling check needs two Periodic runs, got " +
                                               to_string(run1.verdict) + " and " +
                                               to_string(run2.verdict));
  }
  if (!(mu1 > 0) || !(mu2 > 0)) throw Error(ErrorCode::InvalidArgument, "mu must be positive");
  ScalingReport r;
  r.mu1 = mu1;
  r.mu2 = mu2;
  r.amplitude1 = run1.amplitude;
  r.amplitude2 = run2.amplitude;
  r.ratio = run2.amplitude / run1.amplitude;
  r.expected_ratio = std::sqrt(mu2 / mu1);
  r.relative_error = std::abs(r.ratio / r.expected_ratio - 1.0);
  r.within_tolerance = r.relative_error <= tolerance;
  if (auto rho = amplitude_prediction(nf, mu1)) {
    r.predicted1 = 2.0 * *rho;
    r.magnitude_gap1 = std::log10(r.amplitude1 / *r.predicted1);
  }
  if (auto rho = amplitude_prediction(nf, mu2)) {
    r.predicted2 = 2.0 * *rho;
    r.magnitude_gap2 = std::log10(r.amplitude2 / *r.predicted2);
  }
  return r;
}

}  // namespace memtaxis
