#include "memtaxis/model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "memtaxis/errors.hpp"

namespace memtaxis {

namespace {

bool positive_finite(double x) { return std::isfinite(x) && x > 0; }
bool nonneg_finite(double x) { return std::isfinite(x) && x >= 0; }

}  // namespace

void KineticParams::validate() const {
  if (!positive_finite(beta) || !positive_finite(m) || !positive_finite(s)) {
    throw Error(ErrorCode::InvalidArgument, "kinetic parameters beta, m, s must be positive");
  }
}

void TransportParams::validate() const {
  if (!nonneg_finite(d11) || !nonneg_finite(d22) || !nonneg_finite(d21) || !nonneg_finite(xi)) {
    throw Error(ErrorCode::InvalidArgument, "d11, d22, d21, xi must be non-negative");
  }
  if (!positive_finite(ell)) throw Error(ErrorCode::InvalidArgument, "ell must be positive");
}

Kinetics holling_tanner(const KineticParams& kin) {
  return {
      [kin](double u, double v) { return u * (1.0 - kin.beta * u) - kin.m * u * v / (1.0 + u); },
      [kin](double u, double v) { return kin.s * v * (1.0 - v / u); },
  };
}

SteadyState steady_state(const KineticParams& kin) {
  kin.validate();
  const double r = kin.beta + kin.m - 1.0;
  const double disc = std::sqrt(r * r + 4.0 * kin.beta);
  // For r > 0 the textbook form cancels; 2 / (r + disc) is the same root.
  const double u = r > 0 ? 2.0 / (r + disc) : (disc - r) / (2.0 * kin.beta);
  return {u, u};
}

Linearization linearize_from_jacobian(const Mat2& jac, const TransportParams& tr,
                                      const SteadyState& ss) {
  Linearization lin;
  lin.steady = ss;
  lin.a11 = jac.m00;
  lin.a12 = jac.m01;
  lin.a21 = jac.m10;
  lin.a22 = jac.m11;
  lin.A = jac;
  lin.D1 = {tr.d11, tr.xi * ss.u_star, 0.0, tr.d22};
  lin.D2 = {0.0, 0.0, -tr.d21 * ss.v_star, 0.0};
  return lin;
}

Linearization linearize(const KineticParams& kin, const TransportParams& tr,
                        const SteadyState& ss) {
  const double u = ss.u_star;
  const double a11 = 1.0 - 2.0 * kin.beta * u - kin.m * u / ((1.0 + u) * (1.0 + u));
  const double a12 = -kin.m * u / (1.0 + u);
  return linearize_from_jacobian({a11, a12, kin.s, -kin.s}, tr, ss);
}

KineticTaylor kinetic_taylor(const KineticParams& kin, const SteadyState& ss, double tau_c) {
  const double u = ss.u_star;
  const double v = ss.v_star;
  const double m = kin.m;
  const double s = kin.s;
  const double w = 1.0 + u;
  KineticTaylor t;
  t.f20 = {-2.0 * tau_c * kin.beta + 2.0 * tau_c * m * v / (w * w * w),
           -2.0 * tau_c * s * v * v / (u * u * u)};
  t.f11 = {-tau_c * m / (w * w), 2.0 * tau_c * s * v / (u * u)};
  t.f02 = {0.0, -2.0 * tau_c * s / u};
  t.f30 = {-6.0 * tau_c * m * v / (w * w * w * w), 6.0 * tau_c * s * v * v / (u * u * u * u)};
  t.f21 = {2.0 * tau_c * m / (w * w * w), -4.0 * tau_c * s * v / (u * u * u)};
  t.f12 = {0.0, 2.0 * tau_c * s / (u * u)};
  t.f03 = {0.0, 0.0};
  return t;
}

namespace {

class Stencil {
 public:
  Stencil(const std::function<double(double, double)>& fn, double u, double v)
      : fn_(fn), u_(u), v_(v) {}

  double operator()(double du, double dv) const {
    const double value = fn_(u_ + du, v_ + dv);
    if (!std::isfinite(value)) {
      throw Error(ErrorCode::NonFiniteDerivative,
                  "kinetics not finite at (" + std::to_string(u_ + du) + ", " +
                      std::to_string(v_ + dv) + ")");
    }
    return value;
  }

 private:
  const std::function<double(double, double)>& fn_;
  double u_, v_;
};

struct Derivatives {
  double uu, uv, vv, uuu, uuv, uvv, vvv;
};

Derivatives differentiate(const Stencil& f, double h2, double h3) {
  Derivatives d{};
  const double f0 = f(0, 0);
  d.uu = (f(h2, 0) - 2.0 * f0 + f(-h2, 0)) / (h2 * h2);
  d.vv = (f(0, h2) - 2.0 * f0 + f(0, -h2)) / (h2 * h2);
  d.uv = (f(h2, h2) - f(h2, -h2) - f(-h2, h2) + f(-h2, -h2)) / (4.0 * h2 * h2);

  const double h = h3;
  const double den = 2.0 * h * h * h;
  d.uuu = (f(2 * h, 0) - 2.0 * f(h, 0) + 2.0 * f(-h, 0) - f(-2 * h, 0)) / den;
  d.vvv = (f(0, 2 * h) - 2.0 * f(0, h) + 2.0 * f(0, -h) - f(0, -2 * h)) / den;
  // Second difference in the first variable, central difference in the second.
  d.uuv = (f(h, h) - 2.0 * f(0, h) + f(-h, h) - f(h, -h) + 2.0 * f(0, -h) - f(-h, -h)) / den;
  d.uvv = (f(h, h) - 2.0 * f(h, 0) + f(h, -h) - f(-h, h) + 2.0 * f(-h, 0) - f(-h, -h)) / den;
  return d;
}

}  // namespace

KineticTaylor generic_taylor(const Kinetics& kinetics, const SteadyState& point, double tau_c,
                             double step) {
  const double scale = std::max(1.0, std::max(std::abs(point.u_star), std::abs(point.v_star)));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double h2 = step > 0 ? step : std::pow(eps, 0.25) * scale;
  const double h3 = step > 0 ? step : std::pow(eps, 0.2) * scale;

  const Derivatives df = differentiate(Stencil(kinetics.f, point.u_star, point.v_star), h2, h3);
  const Derivatives dg = differentiate(Stencil(kinetics.g, point.u_star, point.v_star), h2, h3);

  KineticTaylor t;
  t.f20 = {tau_c * df.uu, tau_c * dg.uu};
  t.f11 = {tau_c * df.uv, tau_c * dg.uv};
  t.f02 = {tau_c * df.vv, tau_c * dg.vv};
  t.f30 = {tau_c * df.uuu, tau_c * dg.uuu};
  t.f21 = {tau_c * df.uuv, tau_c * dg.uuv};
  t.f12 = {tau_c * df.uvv, tau_c * dg.uvv};
  t.f03 = {tau_c * df.vvv, tau_c * dg.vvv};
  return t;
}

}  // namespace memtaxis
