#include "memtaxis/linear.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "memtaxis/errors.hpp"

namespace memtaxis {

std::string to_string(RootCase c) {
  switch (c) {
    case RootCase::None: return "none";
    case RootCase::OneRoot: return "one_root";
    case RootCase::TwoRoots: return "two_roots";
    case RootCase::Degenerate: return "degenerate";
  }
  return "unknown";
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::StableAllTau: return "StableAllTau";
    case Regime::DelayHopf: return "DelayHopf";
    case Regime::TwoRootCase: return "TwoRootCase";
    case Regime::Indeterminate: return "Indeterminate";
  }
  return "unknown";
}

HopfPoint make_hopf_point(int n_c, double tau_c, double omega_nc) {
  return {n_c, tau_c, omega_nc, tau_c * omega_nc};
}

bool StabilityReport::stable_at(double tau) const {
  if (regime == Regime::StableAllTau) return true;
  if (regime == Regime::DelayHopf && tau_star) return tau < *tau_star;
  return false;
}

ModeAnalysis mode_coefficients(const Linearization& lin, const TransportParams& tr, int n) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "wave number must be non-negative");
  const double u = lin.steady.u_star;
  const double v = lin.steady.v_star;
  const double det_a = lin.A.det();

  ModeAnalysis ma;
  ma.n = n;
  ma.k = wave_factor(n, tr.ell);
  const double k = ma.k;
  const double k2 = k * k;

  const double mixed = tr.d11 * lin.a22 + tr.d22 * lin.a11 - lin.a21 * tr.xi * u;
  ma.T = lin.A.trace() - (tr.d11 + tr.d22) * k;
  ma.J = tr.d11 * tr.d22 * k2 - mixed * k + det_a;
  ma.coupling = tr.d21 * tr.xi * u * v * k2 - tr.d21 * v * lin.a12 * k;
  ma.P = ma.T * ma.T - 2.0 * ma.J;
  ma.Q = (ma.J + ma.coupling) * (ma.J - ma.coupling);
  ma.Gamma0 = (tr.d11 * tr.d22 + tr.d21 * tr.xi * u * v) * k2 -
              (mixed + tr.d21 * v * lin.a12) * k + det_a;
  ma.Q_tilde = (tr.d11 * tr.d22 - tr.d21 * tr.xi * u * v) * k2 -
               (mixed - tr.d21 * v * lin.a12) * k + det_a;

  const double scale = std::abs(ma.J) + std::abs(ma.coupling);
  const double disc = ma.P * ma.P - 4.0 * ma.Q;
  if (std::abs(ma.Q_tilde) <= 1e-12 * std::max(scale, 1e-300)) {
    ma.root_case = RootCase::Degenerate;
  } else if (ma.Q < 0) {
    ma.root_case = RootCase::OneRoot;
  } else if (ma.P < 0 && disc > 0) {
    ma.root_case = RootCase::TwoRoots;
    const double sq = std::sqrt(disc);
    ma.quartic_roots = {std::sqrt((-ma.P + sq) / 2.0), std::sqrt((-ma.P - sq) / 2.0)};
  } else if (ma.P < 0 && disc == 0) {
    ma.root_case = RootCase::Degenerate;
  } else {
    ma.root_case = RootCase::None;
  }
  return ma;
}

ModeWindow mode_window(const Linearization& lin, const TransportParams& tr) {
  const double u = lin.steady.u_star;
  const double v = lin.steady.v_star;
  const double det_a = lin.A.det();

  ModeWindow w;
  w.A1_tilde = tr.d11 * lin.a22 + tr.d22 * lin.a11 - lin.a21 * tr.xi * u - tr.d21 * v * lin.a12;
  w.A2_tilde = tr.d11 * tr.d22 - tr.d21 * tr.xi * u * v;
  w.A3_tilde = w.A1_tilde * w.A1_tilde - 4.0 * w.A2_tilde * det_a;

  if (!(w.A2_tilde > 0)) {
    w.failure = "d11*d22 - d21*xi*u*v <= 0";
  } else if (!(det_a > 0)) {
    w.failure = "Det(A) <= 0";
  } else if (!(w.A1_tilde > 0)) {
    w.failure = "A1~ <= 0";
  } else if (!(w.A3_tilde > 0)) {
    w.failure = "A1~^2 - 4 A2~ Det(A) <= 0";
  }
  if (!w.failure.empty()) return w;

  const double sq = std::sqrt(w.A3_tilde);
  // x1 = (A1 - sq) / (2 A2) rewritten to avoid cancellation.
  w.x1_tilde = 2.0 * det_a / (w.A1_tilde + sq);
  w.x2_tilde = (w.A1_tilde + sq) / (2.0 * w.A2_tilde);
  w.n1 = tr.ell * std::sqrt(*w.x1_tilde);
  w.n2 = tr.ell * std::sqrt(*w.x2_tilde);
  for (int n = std::max(1, static_cast<int>(std::floor(*w.n1)));
       n <= static_cast<int>(std::ceil(*w.n2)); ++n) {
    if (n > *w.n1 && n < *w.n2) w.integer_modes.push_back(n);
  }
  return w;
}

double hopf_frequency(const ModeAnalysis& ma) {
  if (!(ma.Q < 0)) {
    throw Error(ErrorCode::NotOneRootCase,
                "mode " + std::to_string(ma.n) + " has Q_n >= 0, no unique positive root");
  }
  const double sq = std::sqrt(ma.P * ma.P - 4.0 * ma.Q);
  const double omega_sq = ma.P > 0 ? -2.0 * ma.Q / (ma.P + sq) : (-ma.P + sq) / 2.0;
  return std::sqrt(omega_sq);
}

std::vector<double> critical_delays(const ModeAnalysis& ma, int j_max) {
  if (!ma.omega) {
    throw Error(ErrorCode::NotOneRootCase,
                "mode " + std::to_string(ma.n) + " has no crossing frequency");
  }
  const double w = *ma.omega;
  double arg = (w * w - ma.J) / ma.coupling;
  if (!std::isfinite(arg) || std::abs(arg) > 1.0 + 1e-12) {
    std::ostringstream os;
    os << "mode " << ma.n << ": arccos argument " << arg << " outside [-1, 1]";
    throw Error(ErrorCode::ArccosDomain, os.str());
  }
  arg = std::clamp(arg, -1.0, 1.0);
  const double sine = -ma.T * w / ma.coupling;
  if (!(sine > 0)) {
    std::ostringstream os;
    os << "mode " << ma.n << ": sin(omega tau) = " << sine << " is not positive";
    throw Error(ErrorCode::SinSignViolation, os.str());
  }
  const double base = std::acos(arg);
  std::vector<double> ladder;
  ladder.reserve(static_cast<std::size_t>(std::max(j_max, 0)) + 1);
  for (int j = 0; j <= j_max; ++j) {
    ladder.push_back((base + 2.0 * std::numbers::pi * j) / w);
  }
  return ladder;
}

std::complex<double> characteristic_residual(std::complex<double> lambda, double tau, int n,
                                             const Linearization& lin,
                                             const TransportParams& tr) {
  const double u = lin.steady.u_star;
  const double v = lin.steady.v_star;
  const double k = wave_factor(n, tr.ell);
  const std::complex<double> e = std::exp(-lambda * tau);
  const double t_n = lin.A.trace() - (tr.d11 + tr.d22) * k;
  const std::complex<double> j_tilde =
      (tr.d11 * tr.d22 + tr.d21 * tr.xi * u * v * e) * k * k -
      (tr.d11 * lin.a22 + tr.d22 * lin.a11 - lin.a21 * tr.xi * u + tr.d21 * v * lin.a12 * e) * k +
      lin.A.det();
  return lambda * lambda - t_n * lambda + j_tilde;
}

double transversality(const ModeAnalysis& ma) {
  const double denom = ma.coupling * ma.coupling;
  if (denom < 1e-14) {
    throw Error(ErrorCode::ZeroDenominator,
                "mode " + std::to_string(ma.n) + ": delay coupling vanishes");
  }
  if (!(ma.Q < 0)) {
    throw Error(ErrorCode::NotOneRootCase,
                "mode " + std::to_string(ma.n) + ": transversality needs Q_n < 0");
  }
  return std::sqrt(ma.P * ma.P - 4.0 * ma.Q) / denom;
}

StabilityReport classify(const Linearization& lin, const TransportParams& tr, int n_max,
                         int j_max) {
  if (!condition_c0(lin)) {
    std::ostringstream os;
    os << "a11 = " << lin.a11 << " >= 0";
    throw Error(ErrorCode::C0Violation, os.str());
  }
  StabilityReport rep;
  rep.conditions.c0 = true;
  rep.window = mode_window(lin, tr);
  const double det_a = lin.A.det();
  rep.conditions.a2_positive = rep.window.A2_tilde > 0;
  rep.conditions.c2 = det_a > 0 && rep.window.A1_tilde > 0 && rep.window.A3_tilde > 0;

  int scan = std::max(n_max, 8);
  if (rep.window.n2) scan = std::max(scan, static_cast<int>(std::ceil(*rep.window.n2)) + 2);

  bool c1 = true;
  for (int n = 0; n <= scan; ++n) {
    ModeAnalysis ma = mode_coefficients(lin, tr, n);
    const double disc = ma.P * ma.P - 4.0 * ma.Q;
    if (!((ma.P > 0 && ma.Q > 0) || disc < 0)) c1 = false;

    switch (ma.root_case) {
      case RootCase::OneRoot:
        if (n >= 1) {
          ma.omega = hopf_frequency(ma);
          ma.tau_ladder = critical_delays(ma, j_max);
          ma.transversality = transversality(ma);
          rep.hopf_points.push_back(make_hopf_point(n, ma.tau_ladder.front(), *ma.omega));
        }
        break;
      case RootCase::TwoRoots:
        rep.two_root_modes.push_back(n);
        break;
      case RootCase::Degenerate:
        rep.degenerate_modes.push_back(n);
        break;
      case RootCase::None:
        break;
    }
    rep.modes.push_back(std::move(ma));
  }
  rep.conditions.c1 = c1;

  std::sort(rep.hopf_points.begin(), rep.hopf_points.end(),
            [](const HopfPoint& a, const HopfPoint& b) { return a.tau_c < b.tau_c; });

  bool tie = rep.hopf_points.size() >= 2 &&
             std::abs(rep.hopf_points[1].tau_c - rep.hopf_points[0].tau_c) < 1e-9;

  if (!rep.two_root_modes.empty()) {
    rep.regime = Regime::TwoRootCase;
    rep.note = "quartic has two positive roots for some mode; not classified";
  } else if (!rep.hopf_points.empty()) {
    if (tie) {
      rep.regime = Regime::Indeterminate;
      rep.note = "two modes share the first critical delay (double Hopf)";
    } else if (rep.conditions.c2 && rep.conditions.a2_positive) {
      rep.regime = Regime::DelayHopf;
      rep.tau_star = rep.hopf_points.front().tau_c;
    } else {
      rep.regime = Regime::Indeterminate;
      rep.note = "crossing modes found outside the bounded-window case";
    }
  } else if (c1 && rep.degenerate_modes.empty()) {
    rep.regime = Regime::StableAllTau;
  } else {
    rep.regime = Regime::Indeterminate;
    rep.note = rep.degenerate_modes.empty() ? "no crossing and C1 fails"
                                            : "mode with a zero or double root";
  }
  return rep;
}

}  // namespace memtaxis
