#pragma once

// Per-wave-number stability analysis of the linearized delay system:
// characteristic-equation coefficients, the frequency quartic, the window of
// wave numbers that admit a delay-induced Hopf bifurcation, the ladder of
// critical delays, and the overall classification.

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "memtaxis/model.hpp"

namespace memtaxis {

/// n^2 / ell^2. Every mode quantity goes through this one function.
inline double wave_factor(int n, double ell) {
  const double q = static_cast<double>(n) / ell;
  return q * q;
}

enum class RootCase {
  None,       ///< the frequency quartic has no positive root
  OneRoot,    ///< Q_n < 0, exactly one positive root
  TwoRoots,   ///< Q_n > 0, P_n < 0, P_n^2 - 4 Q_n > 0
  Degenerate, ///< Q_n == 0 (zero root) or double root
};

std::string to_string(RootCase c);

struct ModeAnalysis {
  int n = 0;
  double k = 0;        ///< n^2 / ell^2
  double T = 0;        ///< trace term of the characteristic polynomial
  double J = 0;        ///< delay-independent part of the determinant term
  double coupling = 0; ///< d21 xi u* v* k^2 - d21 v* a12 k, the amplitude of the e^{-lambda tau} terms
  double P = 0;
  double Q = 0;
  double Q_tilde = 0;
  double Gamma0 = 0;   ///< Gamma_n(0) = J + coupling
  RootCase root_case = RootCase::None;
  std::optional<double> omega;
  std::vector<double> quartic_roots;  ///< positive roots omega of the quartic (two-root case)
  std::vector<double> tau_ladder;
  std::optional<double> transversality;
};

struct ModeWindow {
  double A1_tilde = 0, A2_tilde = 0, A3_tilde = 0;
  std::optional<double> x1_tilde, x2_tilde;
  std::optional<double> n1, n2;
  std::vector<int> integer_modes;
  std::string failure;  ///< which window premise failed, empty when the window exists

  bool exists() const { return n1.has_value(); }
};

struct HopfPoint {
  int n_c = 0;
  double tau_c = 0;
  double omega_nc = 0;  ///< frequency in the original time scale
  double omega_c = 0;   ///< tau_c * omega_nc, frequency after rescaling time by tau_c
};

HopfPoint make_hopf_point(int n_c, double tau_c, double omega_nc);

enum class Regime { StableAllTau, DelayHopf, TwoRootCase, Indeterminate };

std::string to_string(Regime r);

struct Conditions {
  bool c0 = false;
  bool c1 = false;
  bool c2 = false;
  bool a2_positive = false;  ///< d11 d22 - d21 xi u* v* > 0
};

struct StabilityReport {
  Regime regime = Regime::Indeterminate;
  std::optional<double> tau_star;
  std::vector<HopfPoint> hopf_points;  ///< sorted by tau_{n,0}
  Conditions conditions;
  ModeWindow window;
  std::vector<ModeAnalysis> modes;     ///< n = 0 .. scan limit
  std::vector<int> two_root_modes;
  std::vector<int> degenerate_modes;
  std::string note;

  /// True when the steady state is asymptotically stable at delay tau
  /// according to the classification.
  bool stable_at(double tau) const;
};

/// Coefficients T_n, J_n, P_n, Q_n, Q~_n, Gamma_n(0) and the root case.
ModeAnalysis mode_coefficients(const Linearization& lin, const TransportParams& tr, int n);

ModeWindow mode_window(const Linearization& lin, const TransportParams& tr);

/// Unique positive root of omega^4 + P omega^2 + Q = 0. Throws NotOneRootCase if Q >= 0.
double hopf_frequency(const ModeAnalysis& ma);

/// tau_{n,j} for j = 0..j_max. Requires a computed omega on the mode.
std::vector<double> critical_delays(const ModeAnalysis& ma, int j_max);

/// Gamma_n(lambda) = lambda^2 - T_n lambda + J~_n(tau), with the e^{-lambda tau} terms.
std::complex<double> characteristic_residual(std::complex<double> lambda, double tau, int n,
                                             const Linearization& lin, const TransportParams& tr);

/// Closed form of Re(d lambda / d tau)^{-1} at a crossing: sqrt(P^2 - 4Q) / coupling^2.
/// Throws ZeroDenominator when the coupling vanishes, NotOneRootCase when Q >= 0.
double transversality(const ModeAnalysis& ma);

/// Full analysis: conditions, window, scanned modes, Hopf points and regime.
/// Throws C0Violation when a11 >= 0.
StabilityReport classify(const Linearization& lin, const TransportParams& tr, int n_max = 8,
                         int j_max = 2);

}  // namespace memtaxis
