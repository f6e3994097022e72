#include <cmath>
#include <limits>

#include "memtaxis/kernels/kernels.hpp"

namespace memtaxis::kernels {

namespace {

void faces_scalar(const double* u, const double* v, const double* ud, std::size_t n,
                  const RhsCoeffs& c, double* fu, double* fv) {
  for (std::size_t i = 1; i < n; ++i) {
    const double du = u[i] - u[i - 1];
    const double dv = v[i] - v[i - 1];
    const double dud = ud[i] - ud[i - 1];
    const double ubar = 0.5 * (u[i] + u[i - 1]);
    const double vbar = 0.5 * (v[i] + v[i - 1]);
    fu[i] = c.d11 * du + c.xi * ubar * dv;
    fv[i] = c.d22 * dv - c.d21 * vbar * dud;
  }
}

void cells_scalar(const double* u, const double* v, const double* fu, const double* fv,
                  std::size_t n, const RhsCoeffs& c, double* du, double* dv) {
  for (std::size_t i = 0; i < n; ++i) {
    double a = (fu[i + 1] - fu[i]) * c.inv_dx2;
    double b = (fv[i + 1] - fv[i]) * c.inv_dx2;
    if (c.kinetics) {
      const double ui = u[i];
      const double vi = v[i];
      a += ui * (1.0 - c.beta * ui) - c.m * ui * vi / (1.0 + ui);
      b += c.s * vi * (1.0 - vi / ui);
    }
    du[i] = a;
    dv[i] = b;
  }
}

void axpy_scalar(double* out, const double* x, double a, const double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + a * y[i];
}

void rk4_scalar(double* out, const double* x, double h, const double* k1, const double* k2,
                const double* k3, const double* k4, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = x[i] + h * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
  }
}

void blend4_scalar(double* out, const double* a, const double* b, const double* c,
                   const double* d, const double* w, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = w[0] * a[i] + w[1] * b[i] + w[2] * c[i] + w[3] * d[i];
  }
}

Range range_scalar(const double* x, std::size_t n) {
  Range r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), true};
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(x[i])) r.finite = false;
    if (x[i] < r.lo) r.lo = x[i];
    if (x[i] > r.hi) r.hi = x[i];
  }
  return r;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{"scalar",   faces_scalar,  cells_scalar, axpy_scalar,
                                 rk4_scalar, blend4_scalar, range_scalar};
  return table;
}

}  // namespace memtaxis::kernels
