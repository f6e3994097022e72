#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <optional>

namespace memtaxis {

using cplx = std::complex<double>;

/// Real 2-vector, one entry per equation (prey, predator).
using Vec2 = std::array<double, 2>;

/// Complex 2-vector.
using CVec2 = std::array<cplx, 2>;

/// Row-major real 2x2 matrix.
struct Mat2 {
  double m00 = 0, m01 = 0, m10 = 0, m11 = 0;

  double det() const { return m00 * m11 - m01 * m10; }
  double trace() const { return m00 + m11; }
};

/// Row-major complex 2x2 matrix.
struct CMat2 {
  cplx m00{}, m01{}, m10{}, m11{};

  cplx det() const { return m00 * m11 - m01 * m10; }
  double frobenius_sq() const {
    return std::norm(m00) + std::norm(m01) + std::norm(m10) + std::norm(m11);
  }
};

inline CVec2 operator*(const CMat2& a, const CVec2& x) {
  return {a.m00 * x[0] + a.m01 * x[1], a.m10 * x[0] + a.m11 * x[1]};
}
inline CVec2 operator*(const Mat2& a, const CVec2& x) {
  return {a.m00 * x[0] + a.m01 * x[1], a.m10 * x[0] + a.m11 * x[1]};
}
inline CVec2 operator+(const CVec2& a, const CVec2& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline CVec2 operator-(const CVec2& a, const CVec2& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline CVec2 operator*(cplx s, const CVec2& a) { return {s * a[0], s * a[1]}; }
inline CVec2 operator*(double s, const CVec2& a) { return {s * a[0], s * a[1]}; }

/// Elementwise product of a real coefficient pair with a complex scalar.
inline CVec2 scale(const Vec2& coeff, cplx s) { return {coeff[0] * s, coeff[1] * s}; }

inline CVec2 conj(const CVec2& a) { return {std::conj(a[0]), std::conj(a[1])}; }

/// Plain (non-Hermitian) bilinear pairing a^T b.
inline cplx dot(const CVec2& a, const CVec2& b) { return a[0] * b[0] + a[1] * b[1]; }

/// Row vector times matrix, a^T M.
inline CVec2 row_times(const CVec2& a, const CMat2& m) {
  return {a[0] * m.m00 + a[1] * m.m10, a[0] * m.m01 + a[1] * m.m11};
}

inline double max_abs(const CVec2& a) { return std::max(std::abs(a[0]), std::abs(a[1])); }

/// lambda*I + c1*D1 + c2*D2 + c3*A with complex weights.
inline CMat2 combine(cplx lambda, cplx c1, const Mat2& d1, cplx c2, const Mat2& d2, cplx c3,
                     const Mat2& a) {
  return {lambda + c1 * d1.m00 + c2 * d2.m00 + c3 * a.m00,
          c1 * d1.m01 + c2 * d2.m01 + c3 * a.m01,
          c1 * d1.m10 + c2 * d2.m10 + c3 * a.m10,
          lambda + c1 * d1.m11 + c2 * d2.m11 + c3 * a.m11};
}

/// Adjugate solve of a 2x2 system. Returns nullopt when
/// |det| < rel_tol * ||M||_F^2.
inline std::optional<CVec2> solve(const CMat2& m, const CVec2& rhs, double rel_tol = 1e-12) {
  const cplx d = m.det();
  if (!(std::abs(d) >= rel_tol * m.frobenius_sq())) return std::nullopt;
  return CVec2{(m.m11 * rhs[0] - m.m01 * rhs[1]) / d, (m.m00 * rhs[1] - m.m10 * rhs[0]) / d};
}

}  // namespace memtaxis
