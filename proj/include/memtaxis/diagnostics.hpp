#pragma once

// Post-processing of trajectories: cosine-mode projections, verdicts on
// long-term behavior, and the square-root amplitude law near onset.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "memtaxis/normalform.hpp"
#include "memtaxis/simulator.hpp"

namespace memtaxis {

/// Normalized Neumann eigenfunction gamma_n on (0, ell*pi).
double basis(int n, double x, double ell);

/// Midpoint-rule projection of (u, v) onto gamma_n. Requires n <= n_cells / 4.
std::pair<double, double> project(const FieldPair& field, const Grid& grid, int n);

/// Mean-removed coefficients a_n(t), n = 0..n_max, per snapshot.
struct ModeSpectrum {
  int n_max = 0;
  std::vector<double> times;
  std::vector<std::vector<double>> a_u;  ///< [snapshot][n]
  std::vector<std::vector<double>> a_v;
};

ModeSpectrum spectrum(const Trajectory& traj, int n_max);

/// a_n(t) of the mean-removed prey field over all snapshots.
std::vector<double> mode_trace(const Trajectory& traj, int n);

enum class Verdict { Periodic, ConvergedToSteady, Undecided };
std::string to_string(Verdict v);

struct DetectOptions {
  double transient_fraction = 0.5;
  int window_peaks = 8;
  int min_peaks = 9;
  double spacing_tol = 0.01;
  double drift_tol = 0.02;
  double steady_tol = 1e-4;
  int spectrum_modes = 8;
};

struct PeriodEstimate {
  double period = 0;
  double amplitude = 0;  ///< half peak-to-trough of the mode trace
  double relative_spacing_std = 0;
  double amplitude_drift = 0;
  Verdict verdict = Verdict::Undecided;
  int dominant_mode = -1;  ///< argmax over n >= 1 of the long-term RMS of a_n, -1 if not computed
  double steady_deviation = 0;
  int peak_count = 0;
};

struct Peak {
  double t = 0;
  double value = 0;
};

/// Local maxima with quadratic sub-sample refinement. A new maximum is only
/// accepted after the trace has dipped below `level` since the previous one.
std::vector<Peak> find_peaks(const std::vector<double>& t, const std::vector<double>& y,
                             double level);

/// Verdict on a sampled scalar trace. The steady deviation is supplied by the
/// caller; pass infinity when only the oscillation matters. Throws
/// InsufficientData when too few peaks follow the transient cut.
PeriodEstimate detect_trace(const std::vector<double>& t, const std::vector<double>& y,
                            double steady_deviation, const DetectOptions& opt = {});

/// Sup-norm distance of the final snapshot to (u*, v*).
double steady_deviation(const Trajectory& traj, const SteadyState& steady);

/// Argmax over n = 1..n_max of the RMS of a_n(t) for t past the transient cut.
int dominant_mode(const Trajectory& traj, int n_max, double t_from);

PeriodEstimate detect(const Trajectory& traj, const SteadyState& steady, int n_c,
                      const DetectOptions& opt = {});

struct ScalingReport {
  double mu1 = 0, mu2 = 0;
  double amplitude1 = 0, amplitude2 = 0;
  double ratio = 0;
  double expected_ratio = 0;  ///< sqrt(mu2 / mu1)
  double relative_error = 0;
  bool within_tolerance = false;
  /// Mode amplitude 2 rho* implied by the normal form (a_n = 2 Re(z phi_1)).
  std::optional<double> predicted1, predicted2;
  /// log10(measured / predicted), absent without a prediction.
  std::optional<double> magnitude_gap1, magnitude_gap2;
};

/// Requires both estimates Periodic (VerdictFailure otherwise).
ScalingReport scaling_check(const PeriodEstimate& run1, double mu1, const PeriodEstimate& run2,
                            double mu2, const NormalForm& nf, double tolerance = 0.15);

}  // namespace memtaxis
