#include <numbers>

#include "doctest.h"
#include "memtaxis/errors.hpp"
#include "memtaxis/normalform.hpp"
#include "oracles.hpp"

using namespace memtaxis;

namespace {

struct Case {
  KineticParams kin;
  TransportParams tr;
  SteadyState ss;
  Linearization lin;
  HopfPoint hp;
  KineticTaylor kt;
  NormalForm nf;
};

Case base_case(double ell) {
  Case c;
  c.kin = oracle::base_kin();
  c.tr = oracle::base_tr(ell);
  c.ss = steady_state(c.kin);
  c.lin = linearize(c.kin, c.tr, c.ss);
  c.hp = classify(c.lin, c.tr).hopf_points.front();
  c.kt = kinetic_taylor(c.kin, c.ss, c.hp.tau_c);
  c.nf = normal_form(c.hp, c.lin, c.tr, c.kt);
  return c;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("normal form coefficients at ell = 2") {
  const auto c = base_case(2);
  CHECK(std::abs(c.nf.K1 - 0.016) < 1e-3);
  CHECK(std::abs(c.nf.K2 + 0.9283) < 5e-3);
  CHECK(std::abs(c.nf.K1 * c.nf.K2 + 0.0148) < 5e-4);
  CHECK(c.nf.direction == Direction::Supercritical);
  CHECK(c.nf.orbit_stability == OrbitStability::Stable);
}

TEST_CASE("normal form coefficients at ell = 3") {
  const auto c = base_case(3);
  CHECK(std::abs(c.nf.K1 - 0.0410) < 1e-3);
  CHECK(std::abs(c.nf.K2 + 1.3669) < 7e-3);
  CHECK(std::abs(c.nf.K1 * c.nf.K2 + 0.0561) < 1e-3);
  CHECK(c.nf.direction == Direction::Supercritical);
  CHECK(c.nf.orbit_stability == OrbitStability::Stable);
}

TEST_CASE("eigenvectors annihilate the characteristic matrix and are normalized") {
  for (double ell : {2.0, 3.0}) {
    const auto c = base_case(ell);
    const EigenData& ed = c.nf.eigen;
    const cplx iw{0.0, c.hp.omega_c};
    const CMat2 m = rescaled_characteristic_matrix(c.hp.n_c, iw, c.hp.tau_c, c.lin, c.tr);
    CHECK(max_abs(m * ed.phi) < 1e-12);
    // Left null vector in the plain bilinear pairing.
    CHECK(max_abs(row_times(ed.psi, m)) < 1e-12);
    const CMat2 dm = rescaled_characteristic_derivative(c.hp.n_c, iw, c.hp.tau_c, c.lin, c.tr);
    CHECK(std::abs(dot(ed.psi, dm * ed.phi) - 1.0) < 1e-12);
    const double k = wave_factor(c.hp.n_c, c.tr.ell);
    const cplx scalar = dot(ed.psi, ed.phi) -
                        c.hp.tau_c * k * std::polar(1.0, -c.hp.omega_c) * dot(ed.psi, c.lin.D2 * ed.phi);
    CHECK(std::abs(scalar - 1.0) < 1e-12);
    CHECK(ed.phi[0] == cplx(1.0, 0.0));
  }
}

TEST_CASE("conjugate closure and gauge invariance") {
  for (double ell : {2.0, 3.0}) {
    const auto c = base_case(ell);
    const NormalForm conj_nf = normal_form(c.nf.eigen.conjugated(), c.hp, c.lin, c.tr, c.kt);
    CHECK(rel(conj_nf.B1, std::conj(c.nf.B1)) < 1e-10);
    CHECK(rel(conj_nf.B21, std::conj(c.nf.B21)) < 1e-10);
    CHECK(rel(conj_nf.B22, std::conj(c.nf.B22)) < 1e-10);
    CHECK(rel(conj_nf.B23, std::conj(c.nf.B23)) < 1e-10);
    for (double alpha : {0.3, 1.7, -2.9}) {
      const NormalForm g = normal_form(c.nf.eigen.rotated(alpha), c.hp, c.lin, c.tr, c.kt);
      CHECK(rel(g.B1, c.nf.B1) < 1e-10);
      CHECK(rel(g.B21, c.nf.B21) < 1e-10);
      CHECK(rel(g.B22, c.nf.B22) < 1e-10);
      CHECK(rel(g.B23, c.nf.B23) < 1e-10);
    }
  }
}

TEST_CASE("center manifold residuals") {
  for (double ell : {2.0, 3.0}) {
    const auto c = base_case(ell);
    const auto r = center_manifold_residuals(c.nf.h, c.nf.tensors, c.nf.eigen, c.hp, c.lin, c.tr);
    for (double x : r) CHECK(x < 1e-9);
    CHECK(c.nf.h.h0_20.rate == doctest::Approx(2 * c.hp.omega_c));
    CHECK(c.nf.h.h0_11.rate == 0.0);
  }
}

TEST_CASE("quadratic and cubic tensors against finite-difference derivatives") {
  for (double ell : {2.0, 3.0}) {
    const auto c = base_case(ell);
    const auto F = oracle::scaled_kinetics(c.kin, c.hp.tau_c);
    const oracle::R2 x{c.ss.u_star, c.ss.v_star};
    const CVec2 phi = c.nf.eigen.phi;
    const CVec2 a20 = oracle::d2_complex(F, x, phi, phi, 1e-3);
    const CVec2 a11 = oracle::d2_complex(F, x, phi, conj(phi), 1e-3);
    const CVec2 d3 = oracle::d3_aab(F, x, phi, 1e-2);
    const TensorSet& t = c.nf.tensors;
    const auto close = [](const CVec2& got, const CVec2& want) {
      CHECK(max_abs(got - want) < 1e-5 * std::max(1.0, max_abs(want)));
    };
    close(t.A20, a20);
    close(t.A11, 2.0 * a11);
    close(t.A21, 3.0 * d3);
    close(t.A02, conj(t.A20));
    close(t.A12, conj(t.A21));
    close(t.A03, conj(t.A30));
  }
}

TEST_CASE("B22 and B23 against a straight-line transcription") {
  for (double ell : {2.0, 3.0}) {
    const auto c = base_case(ell);
    const auto s = oracle::straight_b22_b23(c.nf, c.hp, c.lin, c.tr, c.kin);
    CHECK(rel(c.nf.B22, s.B22) < 1e-10);
    CHECK(rel(c.nf.B23, s.B23) < 1e-10);
  }
}

TEST_CASE("B1 real part equals twice the crossing speed in rescaled time") {
  // The rescaled eigenvalue is tau lambda(tau); its tau-derivative is lambda + tau lambda'.
  const auto c = base_case(2);
  const auto vel = oracle::root_velocity(c.hp.tau_c, c.hp.omega_nc, c.hp.n_c, c.lin, c.tr);
  REQUIRE(vel.has_value());
  const cplx expected = cplx(0.0, c.hp.omega_nc) + c.hp.tau_c * *vel;
  CHECK(std::abs(0.5 * c.nf.B1 - expected) < 1e-6);
}

TEST_CASE("classification from synthetic coefficients") {
  const auto sup = classify_normal_form({0.2, 0}, {-6.0, 0}, {0, 0}, {0, 0});
  CHECK(sup.direction == Direction::Supercritical);
  CHECK(sup.orbit_stability == OrbitStability::Stable);
  const auto sub = classify_normal_form({0.2, 0}, {6.0, 0}, {0, 0}, {0, 0});
  CHECK(sub.direction == Direction::Subcritical);
  CHECK(sub.orbit_stability == OrbitStability::Unstable);
  const auto deg = classify_normal_form({0.2, 0}, {0, 0}, {0, 0}, {0, 0});
  CHECK(deg.direction == Direction::Degenerate);
  CHECK(sup.K2 == doctest::Approx(-1.0));
  CHECK(sup.K1 == doctest::Approx(0.1));

  CHECK(amplitude_prediction(sup, 0.1).value() == doctest::Approx(std::sqrt(0.01)));
  CHECK_FALSE(amplitude_prediction(sup, -0.1).has_value());
  CHECK_FALSE(amplitude_prediction(deg, 0.1).has_value());
}

TEST_CASE("singular eigenvector denominator is reported") {
  const auto c = base_case(2);
  // a12 = xi u* k makes the phi_2 denominator vanish.
  Linearization lin = c.lin;
  lin.a12 = c.tr.xi * c.ss.u_star * wave_factor(c.hp.n_c, c.tr.ell);
  CHECK_THROWS_AS(eigenvectors(c.hp, lin, c.tr), Error);
}
