#pragma once

// Kinetics, steady state, and Jacobian of the Holling-Tanner predator-prey
// system with predator-taxis and memory-based diffusion, plus the kinetic
// Taylor coefficients that feed the normal-form computation.

#include <functional>

#include "memtaxis/linalg2.hpp"

namespace memtaxis {

struct KineticParams {
  double beta = 0;  ///< intraspecific competition of the prey
  double m = 0;     ///< capture rate
  double s = 0;     ///< predator intrinsic growth rate

  /// Throws InvalidArgument unless beta, m, s are all positive and finite.
  void validate() const;
};

struct TransportParams {
  double d11 = 0;  ///< prey random diffusion
  double d22 = 0;  ///< predator random diffusion
  double d21 = 0;  ///< memory-based diffusion of the predator
  double xi = 0;   ///< predator-taxis rate
  double ell = 1;  ///< domain scale, the domain is (0, ell*pi)

  void validate() const;
};

struct SteadyState {
  double u_star = 0;
  double v_star = 0;
};

/// Jacobian entries at the steady state and the matrices of the linearized
/// transport/kinetic operator:
///   D1 = [[d11, xi u*], [0, d22]],  D2 = [[0, 0], [-d21 v*, 0]],  A = [[a11, a12], [a21, a22]].
struct Linearization {
  SteadyState steady;
  double a11 = 0, a12 = 0, a21 = 0, a22 = 0;
  Mat2 D1, D2, A;
};

/// Taylor coefficients f_{jk} = d^{j+k}(tau_c (f, g)) / du^j dv^k at the steady
/// state. Entry [0] belongs to the prey equation, [1] to the predator.
struct KineticTaylor {
  Vec2 f20{}, f11{}, f02{};
  Vec2 f30{}, f21{}, f12{}, f03{};
};

/// Reaction terms as plain scalar functions of (u, v).
struct Kinetics {
  std::function<double(double, double)> f;
  std::function<double(double, double)> g;
};

/// f = u(1 - beta u) - m u v / (1 + u),  g = s v (1 - v / u).
Kinetics holling_tanner(const KineticParams& kin);

/// Closed-form positive root u* = v* = (sqrt(R^2 + 4 beta) - R) / (2 beta), R = beta + m - 1.
SteadyState steady_state(const KineticParams& kin);

/// Analytic Jacobian at the steady state and the matrices D1, D2, A.
Linearization linearize(const KineticParams& kin, const TransportParams& tr,
                        const SteadyState& ss);

/// Assembles D1, D2 and A around an arbitrary Jacobian.
Linearization linearize_from_jacobian(const Mat2& jacobian, const TransportParams& tr,
                                      const SteadyState& ss);

/// Condition C0: a11 < 0, the premise of the delay-stability analysis.
inline bool condition_c0(const Linearization& lin) { return lin.a11 < 0; }

/// Closed-form second and third derivatives of the Holling-Tanner kinetics,
/// each multiplied by tau_c.
KineticTaylor kinetic_taylor(const KineticParams& kin, const SteadyState& ss, double tau_c);

/// Finite-difference Taylor coefficients of arbitrary kinetics.
/// With step <= 0 the steps are chosen automatically from machine precision
/// and the magnitude of the expansion point. Throws NonFiniteDerivative when
/// a stencil evaluation is not finite.
KineticTaylor generic_taylor(const Kinetics& kinetics, const SteadyState& point, double tau_c,
                             double step = 0.0);

}  // namespace memtaxis
