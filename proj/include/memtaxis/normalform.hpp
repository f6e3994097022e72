#pragma once

// Third-order Hopf normal form at a critical point of the memory/taxis
// system. Time is rescaled by tau_c, so every coefficient below lives on the
// unit delay interval [-1, 0].

#include <optional>
#include <string>

#include "memtaxis/linear.hpp"
#include "memtaxis/model.hpp"

namespace memtaxis {

/// Critical eigenvector phi (phi_1 = 1), adjoint eigenvector psi and the
/// normalization factor eta, such that psi^T M~'(i omega_c) phi = 1.
///
/// omega_c is stored with its sign: the conjugate pipeline uses -omega_c
/// with conj(phi), conj(psi).
struct EigenData {
  CVec2 phi{};
  CVec2 psi{};
  cplx eta{};
  double omega_c = 0;

  /// phi e^{i omega_c theta}
  CVec2 phi_at(double theta) const;
  /// psi e^{-i omega_c s}
  CVec2 psi_at(double s) const;

  /// The same data with (phi, psi) rotated by (e^{i alpha}, e^{-i alpha}).
  EigenData rotated(double alpha) const;
  /// The conjugate branch (-omega_c, conj(phi), conj(psi)).
  EigenData conjugated() const;
};

/// Quadratic and cubic coefficient vectors of the reduced nonlinearity.
struct TensorSet {
  CVec2 A20{}, A02{}, A11{};
  CVec2 A30{}, A03{}, A21{}, A12{};
  CVec2 A20_d{}, A02_d{}, A11_d{};
  CVec2 A20_tilde{}, A11_tilde{};
};

/// A center-manifold coefficient h(theta) = value * e^{i rate theta}.
struct HCoefficient {
  CVec2 value{};
  double rate = 0;

  CVec2 at(double theta) const;
};

struct CenterManifoldH {
  HCoefficient h0_20, h0_11, h2nc_20, h2nc_11;
};

enum class Direction { Supercritical, Subcritical, Degenerate };
enum class OrbitStability { Stable, Unstable, Degenerate };

std::string to_string(Direction d);
std::string to_string(OrbitStability s);

struct NormalForm {
  cplx B1{}, B21{}, B22{}, B23{}, B2{};
  double K1 = 0;
  double K2 = 0;
  Direction direction = Direction::Degenerate;
  OrbitStability orbit_stability = OrbitStability::Degenerate;

  EigenData eigen;
  TensorSet tensors;
  CenterManifoldH h;
};

/// M~_n(lambda) = lambda I + tau_c k_n D1 + tau_c k_n e^{-lambda} D2 - tau_c A.
CMat2 rescaled_characteristic_matrix(int n, cplx lambda, double tau_c, const Linearization& lin,
                                     const TransportParams& tr);

/// Derivative of M~_n with respect to lambda: I - tau_c k_n e^{-lambda} D2.
CMat2 rescaled_characteristic_derivative(int n, cplx lambda, double tau_c,
                                         const Linearization& lin, const TransportParams& tr);

/// Throws SingularEigenvector when a closed-form denominator is below 1e-12.
EigenData eigenvectors(const HopfPoint& hp, const Linearization& lin, const TransportParams& tr);

TensorSet tensors(const EigenData& ed, const KineticTaylor& kt, const HopfPoint& hp,
                  const TransportParams& tr);

/// Solves the four resolvent systems. Throws SingularResolvent naming the
/// offending matrix.
CenterManifoldH center_manifold(const TensorSet& ts, const EigenData& ed, const HopfPoint& hp,
                                const Linearization& lin, const TransportParams& tr);

/// Residuals of the four h-systems, max-norm each, in the order
/// h0_20, h0_11, h2nc_20, h2nc_11.
std::array<double, 4> center_manifold_residuals(const CenterManifoldH& cm, const TensorSet& ts,
                                                const EigenData& ed, const HopfPoint& hp,
                                                const Linearization& lin,
                                                const TransportParams& tr);

cplx b1(const EigenData& ed, const HopfPoint& hp, const Linearization& lin,
        const TransportParams& tr);
cplx b21(const EigenData& ed, const TensorSet& ts, const TransportParams& tr);
cplx b22(const EigenData& ed, const CenterManifoldH& cm, const KineticTaylor& kt,
         const TransportParams& tr);
cplx b23(const EigenData& ed, const CenterManifoldH& cm, const HopfPoint& hp,
         const TransportParams& tr);

/// K1, K2 and the classification from B1 and B2.
NormalForm classify_normal_form(cplx B1, cplx B21, cplx B22, cplx B23);

/// Full pipeline: eigenvectors, tensors, center manifold, B-coefficients.
NormalForm normal_form(const HopfPoint& hp, const Linearization& lin, const TransportParams& tr,
                       const KineticTaylor& kt);

/// Pipeline starting from caller-supplied eigen data (gauge and conjugation checks).
NormalForm normal_form(const EigenData& ed, const HopfPoint& hp, const Linearization& lin,
                       const TransportParams& tr, const KineticTaylor& kt);

/// Stationary amplitude sqrt(-K1 mu / K2) of rho' = K1 mu rho + K2 rho^3,
/// absent when K1 mu / K2 > 0 or K2 == 0.
std::optional<double> amplitude_prediction(const NormalForm& nf, double mu);

}  // namespace memtaxis
