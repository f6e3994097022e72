#include "memtaxis/normalform.hpp"

#include <cmath>
#include <numbers>

#include "memtaxis/errors.hpp"

namespace memtaxis {

namespace {

constexpr cplx I{0.0, 1.0};

cplx unit_phase(double angle) { return std::polar(1.0, angle); }

}  // namespace

std::string to_string(Direction d) {
  switch (d) {
    case Direction::Supercritical: return "supercritical";
    case Direction::Subcritical: return "subcritical";
    case Direction::Degenerate: return "degenerate";
  }
  return "unknown";
}

std::string to_string(OrbitStability s) {
  switch (s) {
    case OrbitStability::Stable: return "stable";
    case OrbitStability::Unstable: return "unstable";
    case OrbitStability::Degenerate: return "degenerate";
  }
  return "unknown";
}

CVec2 EigenData::phi_at(double theta) const { return unit_phase(omega_c * theta) * phi; }
CVec2 EigenData::psi_at(double s) const { return unit_phase(-omega_c * s) * psi; }

EigenData EigenData::rotated(double alpha) const {
  EigenData out = *this;
  out.phi = unit_phase(alpha) * phi;
  out.psi = unit_phase(-alpha) * psi;
  out.eta = unit_phase(-alpha) * eta;
  return out;
}

EigenData EigenData::conjugated() const {
  return {conj(phi), conj(psi), std::conj(eta), -omega_c};
}

CVec2 HCoefficient::at(double theta) const { return unit_phase(rate * theta) * value; }

CMat2 rescaled_characteristic_matrix(int n, cplx lambda, double tau_c, const Linearization& lin,
                                     const TransportParams& tr) {
  const double k = wave_factor(n, tr.ell);
  return combine(lambda, tau_c * k, lin.D1, tau_c * k * std::exp(-lambda), lin.D2, -tau_c, lin.A);
}

CMat2 rescaled_characteristic_derivative(int n, cplx lambda, double tau_c,
                                         const Linearization& lin, const TransportParams& tr) {
  const double k = wave_factor(n, tr.ell);
  return combine(1.0, 0.0, lin.D1, -tau_c * k * std::exp(-lambda), lin.D2, 0.0, lin.A);
}

EigenData eigenvectors(const HopfPoint& hp, const Linearization& lin, const TransportParams& tr) {
  const double k = wave_factor(hp.n_c, tr.ell);
  const double u = lin.steady.u_star;
  const double v = lin.steady.v_star;
  const double w = hp.omega_nc;

  const double phi_den = tr.xi * u * k - lin.a12;
  const cplx psi_den = I * w + tr.d22 * k - lin.a22;
  if (std::abs(phi_den) < 1e-12 || std::abs(psi_den) < 1e-12) {
    throw Error(ErrorCode::SingularEigenvector,
                "eigenvector denominator vanishes at mode " + std::to_string(hp.n_c));
  }

  EigenData ed;
  ed.omega_c = hp.omega_c;
  ed.phi = {1.0, (lin.a11 - I * w - tr.d11 * k) / phi_den};
  // psi^T (I - tau_c k e^{-i omega_c} D2) phi = 1 fixes eta.
  const cplx delayed = hp.tau_c * tr.d21 * v * k * unit_phase(-hp.omega_c) * (lin.a12 - tr.xi * u * k);
  ed.eta = psi_den / (2.0 * I * w + k * tr.d11 - lin.a11 + k * tr.d22 - lin.a22 + delayed);
  ed.psi = {ed.eta, ed.eta * (lin.a12 - tr.xi * u * k) / psi_den};
  return ed;
}

TensorSet tensors(const EigenData& ed, const KineticTaylor& kt, const HopfPoint& hp,
                  const TransportParams& tr) {
  const double k = wave_factor(hp.n_c, tr.ell);
  const double tau = hp.tau_c;
  const cplx p1 = ed.phi[0];
  const cplx p2 = ed.phi[1];
  const cplx q1 = std::conj(p1);
  const cplx q2 = std::conj(p2);
  const cplx p1m = ed.phi_at(-1.0)[0];
  const cplx q1m = std::conj(p1m);

  TensorSet ts;
  ts.A20 = scale(kt.f20, p1 * p1) + scale(kt.f02, p2 * p2) + scale(kt.f11, 2.0 * p1 * p2);
  ts.A02 = scale(kt.f20, q1 * q1) + scale(kt.f02, q2 * q2) + scale(kt.f11, 2.0 * q1 * q2);
  ts.A11 = scale(kt.f20, 2.0 * p1 * q1) + scale(kt.f02, 2.0 * p2 * q2) +
           scale(kt.f11, 2.0 * (p1 * q2 + q1 * p2));

  ts.A30 = scale(kt.f30, p1 * p1 * p1) + scale(kt.f03, p2 * p2 * p2) +
           scale(kt.f21, 3.0 * p1 * p1 * p2) + scale(kt.f12, 3.0 * p1 * p2 * p2);
  ts.A03 = scale(kt.f30, q1 * q1 * q1) + scale(kt.f03, q2 * q2 * q2) +
           scale(kt.f21, 3.0 * q1 * q1 * q2) + scale(kt.f12, 3.0 * q1 * q2 * q2);
  ts.A21 = scale(kt.f30, 3.0 * p1 * p1 * q1) + scale(kt.f03, 3.0 * p2 * p2 * q2) +
           scale(kt.f21, 3.0 * (p1 * p1 * q2 + 2.0 * p1 * q1 * p2)) +
           scale(kt.f12, 3.0 * (2.0 * p1 * p2 * q2 + q1 * p2 * p2));
  ts.A12 = scale(kt.f30, 3.0 * p1 * q1 * q1) + scale(kt.f03, 3.0 * p2 * q2 * q2) +
           scale(kt.f21, 3.0 * (2.0 * p1 * q1 * q2 + q1 * q1 * p2)) +
           scale(kt.f12, 3.0 * (p1 * q2 * q2 + 2.0 * q1 * p2 * q2));

  ts.A20_d = {2.0 * tr.xi * tau * p1 * p2, -2.0 * tr.d21 * tau * p1m * p2};
  ts.A02_d = {2.0 * tr.xi * tau * q1 * q2, -2.0 * tr.d21 * tau * q1m * q2};
  ts.A11_d = {cplx(4.0 * tr.xi * tau * std::real(p1 * q2)),
              cplx(-4.0 * tr.d21 * tau * std::real(p1m * q2))};

  ts.A20_tilde = ts.A20 - (2.0 * k) * ts.A20_d;
  ts.A11_tilde = ts.A11 - (2.0 * k) * ts.A11_d;
  return ts;
}

namespace {

struct HSystem {
  const char* name;
  int n;
  cplx lambda;
  CVec2 rhs;
  double rate;
};

std::array<HSystem, 4> h_systems(const TensorSet& ts, const EigenData& ed, const HopfPoint& hp,
                                 const TransportParams& tr) {
  const double length = tr.ell * std::numbers::pi;
  const double w0 = 1.0 / std::sqrt(length);
  const double w2 = 1.0 / std::sqrt(2.0 * length);
  const cplx two_iw = 2.0 * I * ed.omega_c;
  return {{
      {"M~_0(2i omega_c)", 0, two_iw, w0 * ts.A20, 2.0 * ed.omega_c},
      {"M~_0(0)", 0, 0.0, w0 * ts.A11, 0.0},
      {"M~_2nc(2i omega_c)", 2 * hp.n_c, two_iw, w2 * ts.A20_tilde, 2.0 * ed.omega_c},
      {"M~_2nc(0)", 2 * hp.n_c, 0.0, w2 * ts.A11_tilde, 0.0},
  }};
}

}  // namespace

CenterManifoldH center_manifold(const TensorSet& ts, const EigenData& ed, const HopfPoint& hp,
                                const Linearization& lin, const TransportParams& tr) {
  std::array<HCoefficient, 4> out;
  const auto systems = h_systems(ts, ed, hp, tr);
  for (std::size_t i = 0; i < systems.size(); ++i) {
    const HSystem& s = systems[i];
    const CMat2 m = rescaled_characteristic_matrix(s.n, s.lambda, hp.tau_c, lin, tr);
    const auto x = solve(m, s.rhs);
    if (!x) throw Error(ErrorCode::SingularResolvent, std::string(s.name) + " is singular");
    out[i] = {*x, s.rate};
  }
  return {out[0], out[1], out[2], out[3]};
}

std::array<double, 4> center_manifold_residuals(const CenterManifoldH& cm, const TensorSet& ts,
                                                const EigenData& ed, const HopfPoint& hp,
                                                const Linearization& lin,
                                                const TransportParams& tr) {
  const auto systems = h_systems(ts, ed, hp, tr);
  const std::array<const HCoefficient*, 4> hs{&cm.h0_20, &cm.h0_11, &cm.h2nc_20, &cm.h2nc_11};
  std::array<double, 4> res{};
  for (std::size_t i = 0; i < systems.size(); ++i) {
    const HSystem& s = systems[i];
    const CMat2 m = rescaled_characteristic_matrix(s.n, s.lambda, hp.tau_c, lin, tr);
    res[i] = max_abs(m * hs[i]->value - s.rhs);
  }
  return res;
}

cplx b1(const EigenData& ed, const HopfPoint& hp, const Linearization& lin,
        const TransportParams& tr) {
  const double k = wave_factor(hp.n_c, tr.ell);
  const CVec2 phi0 = ed.phi;
  const CVec2 phim = ed.phi_at(-1.0);
  const CVec2 inner = lin.A * phi0 - k * (lin.D1 * phi0 + lin.D2 * phim);
  return 2.0 * dot(ed.psi, inner);
}

cplx b21(const EigenData& ed, const TensorSet& ts, const TransportParams& tr) {
  return 3.0 / (2.0 * tr.ell * std::numbers::pi) * dot(ed.psi, ts.A21);
}

namespace {

// Bilinear kinetic pairing of a center direction a with a correction y.
CVec2 kinetic_pairing(const KineticTaylor& kt, const CVec2& a, const CVec2& y) {
  return scale(kt.f20, 2.0 * a[0] * y[0]) + scale(kt.f02, 2.0 * a[1] * y[1]) +
         scale(kt.f11, 2.0 * (a[0] * y[1] + a[1] * y[0]));
}

// Taxis/memory pairings, j = 1, 2, 3. a0/am are the center direction at
// theta = 0 and -1, y0/ym the correction at theta = 0 and -1.
struct TransportPairing {
  double xi_tau;
  double d21_tau;

  CVec2 operator()(int j, const CVec2& a0, const CVec2& am, const CVec2& y0,
                   const CVec2& ym) const {
    switch (j) {
      case 1:
        return {2.0 * xi_tau * a0[1] * y0[0], -2.0 * d21_tau * am[0] * y0[1]};
      case 2:
        return {2.0 * xi_tau * (a0[1] * y0[0] + a0[0] * y0[1]),
                -2.0 * d21_tau * (a0[1] * ym[0] + am[0] * y0[1])};
      default:
        return {2.0 * xi_tau * a0[0] * y0[1], -2.0 * d21_tau * a0[1] * ym[0]};
    }
  }
};

}  // namespace

cplx b22(const EigenData& ed, const CenterManifoldH& cm, const KineticTaylor& kt,
         const TransportParams& tr) {
  const double length = tr.ell * std::numbers::pi;
  const CVec2 phi = ed.phi;
  const CVec2 phib = conj(ed.phi);
  const CVec2 zero_mode = kinetic_pairing(kt, phi, cm.h0_11.at(0.0)) +
                          kinetic_pairing(kt, phib, cm.h0_20.at(0.0));
  const CVec2 double_mode = kinetic_pairing(kt, phi, cm.h2nc_11.at(0.0)) +
                            kinetic_pairing(kt, phib, cm.h2nc_20.at(0.0));
  return dot(ed.psi, zero_mode) / std::sqrt(length) +
         dot(ed.psi, double_mode) / std::sqrt(2.0 * length);
}

cplx b23(const EigenData& ed, const CenterManifoldH& cm, const HopfPoint& hp,
         const TransportParams& tr) {
  const double length = tr.ell * std::numbers::pi;
  const double k = wave_factor(hp.n_c, tr.ell);
  const TransportPairing pair{tr.xi * hp.tau_c, tr.d21 * hp.tau_c};

  const CVec2 phi0 = ed.phi;
  const CVec2 phim = ed.phi_at(-1.0);
  const CVec2 phib0 = conj(phi0);
  const CVec2 phibm = conj(phim);

  const CVec2 zero_mode = pair(1, phi0, phim, cm.h0_11.at(0.0), cm.h0_11.at(-1.0)) +
                          pair(1, phib0, phibm, cm.h0_20.at(0.0), cm.h0_20.at(-1.0));

  const std::array<double, 3> weights{-k, 2.0 * k, -4.0 * k};
  CVec2 double_mode{};
  for (int j = 1; j <= 3; ++j) {
    const CVec2 term = pair(j, phi0, phim, cm.h2nc_11.at(0.0), cm.h2nc_11.at(-1.0)) +
                       pair(j, phib0, phibm, cm.h2nc_20.at(0.0), cm.h2nc_20.at(-1.0));
    double_mode = double_mode + weights[j - 1] * term;
  }
  return -k / std::sqrt(length) * dot(ed.psi, zero_mode) +
         dot(ed.psi, double_mode) / std::sqrt(2.0 * length);
}

NormalForm classify_normal_form(cplx B1, cplx B21, cplx B22, cplx B23) {
  NormalForm nf;
  nf.B1 = B1;
  nf.B21 = B21;
  nf.B22 = B22;
  nf.B23 = B23;
  nf.B2 = B21 + 1.5 * (B22 + B23);
  nf.K1 = 0.5 * nf.B1.real();
  nf.K2 = nf.B2.real() / 6.0;

  if (std::abs(nf.K2) < 1e-10) {
    nf.direction = Direction::Degenerate;
    nf.orbit_stability = OrbitStability::Degenerate;
    return nf;
  }
  const double prod = nf.K1 * nf.K2;
  nf.direction = prod < 0   ? Direction::Supercritical
                 : prod > 0 ? Direction::Subcritical
                            : Direction::Degenerate;
  nf.orbit_stability = nf.K2 < 0 ? OrbitStability::Stable : OrbitStability::Unstable;
  return nf;
}

NormalForm normal_form(const EigenData& ed, const HopfPoint& hp, const Linearization& lin,
                       const TransportParams& tr, const KineticTaylor& kt) {
  const TensorSet ts = tensors(ed, kt, hp, tr);
  const CenterManifoldH cm = center_manifold(ts, ed, hp, lin, tr);
  NormalForm nf = classify_normal_form(b1(ed, hp, lin, tr), b21(ed, ts, tr),
                                       b22(ed, cm, kt, tr), b23(ed, cm, hp, tr));
  nf.eigen = ed;
  nf.tensors = ts;
  nf.h = cm;
  return nf;
}

NormalForm normal_form(const HopfPoint& hp, const Linearization& lin, const TransportParams& tr,
                       const KineticTaylor& kt) {
  return normal_form(eigenvectors(hp, lin, tr), hp, lin, tr, kt);
}

std::optional<double> amplitude_prediction(const NormalForm& nf, double mu) {
  if (nf.K2 == 0.0) return std::nullopt;
  const double ratio = nf.K1 * mu / nf.K2;
  if (ratio > 0) return std::nullopt;
  return std::sqrt(-ratio);
}

}  // namespace memtaxis
