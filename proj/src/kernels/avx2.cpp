// Compiled with -mavx2 -mfma. Only reached through the dispatcher after a
// CPU feature check.

#include <immintrin.h>

#include <cmath>
#include <limits>

#include "memtaxis/kernels/kernels.hpp"

namespace memtaxis::kernels {

namespace {

void faces_avx2(const double* u, const double* v, const double* ud, std::size_t n,
                const RhsCoeffs& c, double* fu, double* fv) {
  const __m256d d11 = _mm256_set1_pd(c.d11);
  const __m256d d22 = _mm256_set1_pd(c.d22);
  const __m256d hxi = _mm256_set1_pd(0.5 * c.xi);
  const __m256d hd21 = _mm256_set1_pd(0.5 * c.d21);
  std::size_t i = 1;
  for (; i + 4 <= n; i += 4) {
    const __m256d ur = _mm256_loadu_pd(u + i);
    const __m256d ul = _mm256_loadu_pd(u + i - 1);
    const __m256d vr = _mm256_loadu_pd(v + i);
    const __m256d vl = _mm256_loadu_pd(v + i - 1);
    const __m256d dud = _mm256_sub_pd(_mm256_loadu_pd(ud + i), _mm256_loadu_pd(ud + i - 1));
    const __m256d du = _mm256_sub_pd(ur, ul);
    const __m256d dv = _mm256_sub_pd(vr, vl);
    const __m256d usum = _mm256_add_pd(ur, ul);
    const __m256d vsum = _mm256_add_pd(vr, vl);
    _mm256_storeu_pd(fu + i, _mm256_fmadd_pd(d11, du, _mm256_mul_pd(_mm256_mul_pd(hxi, usum), dv)));
    _mm256_storeu_pd(fv + i,
                     _mm256_fnmadd_pd(_mm256_mul_pd(hd21, vsum), dud, _mm256_mul_pd(d22, dv)));
  }
  for (; i < n; ++i) {
    const double du = u[i] - u[i - 1];
    const double dv = v[i] - v[i - 1];
    const double dud = ud[i] - ud[i - 1];
    fu[i] = c.d11 * du + 0.5 * c.xi * (u[i] + u[i - 1]) * dv;
    fv[i] = c.d22 * dv - 0.5 * c.d21 * (v[i] + v[i - 1]) * dud;
  }
}

void cells_avx2(const double* u, const double* v, const double* fu, const double* fv,
                std::size_t n, const RhsCoeffs& c, double* du, double* dv) {
  const __m256d inv = _mm256_set1_pd(c.inv_dx2);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d beta = _mm256_set1_pd(c.beta);
  const __m256d m = _mm256_set1_pd(c.m);
  const __m256d s = _mm256_set1_pd(c.s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d a = _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(fu + i + 1), _mm256_loadu_pd(fu + i)), inv);
    __m256d b = _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(fv + i + 1), _mm256_loadu_pd(fv + i)), inv);
    if (c.kinetics) {
      const __m256d ui = _mm256_loadu_pd(u + i);
      const __m256d vi = _mm256_loadu_pd(v + i);
      const __m256d logistic = _mm256_mul_pd(ui, _mm256_fnmadd_pd(beta, ui, one));
      const __m256d holling =
          _mm256_div_pd(_mm256_mul_pd(_mm256_mul_pd(m, ui), vi), _mm256_add_pd(one, ui));
      a = _mm256_add_pd(a, _mm256_sub_pd(logistic, holling));
      const __m256d tanner = _mm256_mul_pd(_mm256_mul_pd(s, vi), _mm256_sub_pd(one, _mm256_div_pd(vi, ui)));
      b = _mm256_add_pd(b, tanner);
    }
    _mm256_storeu_pd(du + i, a);
    _mm256_storeu_pd(dv + i, b);
  }
  for (; i < n; ++i) {
    double a = (fu[i + 1] - fu[i]) * c.inv_dx2;
    double b = (fv[i + 1] - fv[i]) * c.inv_dx2;
    if (c.kinetics) {
      a += u[i] * (1.0 - c.beta * u[i]) - c.m * u[i] * v[i] / (1.0 + u[i]);
      b += c.s * v[i] * (1.0 - v[i] / u[i]);
    }
    du[i] = a;
    dv[i] = b;
  }
}

void axpy_avx2(double* out, const double* x, double a, const double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) out[i] = x[i] + a * y[i];
}

void rk4_avx2(double* out, const double* x, double h, const double* k1, const double* k2,
              const double* k3, const double* k4, std::size_t n) {
  const __m256d hv = _mm256_set1_pd(h);
  const __m256d two = _mm256_set1_pd(2.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d mid = _mm256_add_pd(_mm256_loadu_pd(k2 + i), _mm256_loadu_pd(k3 + i));
    const __m256d ends = _mm256_add_pd(_mm256_loadu_pd(k1 + i), _mm256_loadu_pd(k4 + i));
    const __m256d sum = _mm256_fmadd_pd(two, mid, ends);
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(hv, sum, _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) out[i] = x[i] + h * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
}

void blend4_avx2(double* out, const double* a, const double* b, const double* c,
                 const double* d, const double* w, std::size_t n) {
  const __m256d w0 = _mm256_set1_pd(w[0]);
  const __m256d w1 = _mm256_set1_pd(w[1]);
  const __m256d w2 = _mm256_set1_pd(w[2]);
  const __m256d w3 = _mm256_set1_pd(w[3]);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_mul_pd(w0, _mm256_loadu_pd(a + i));
    acc = _mm256_fmadd_pd(w1, _mm256_loadu_pd(b + i), acc);
    acc = _mm256_fmadd_pd(w2, _mm256_loadu_pd(c + i), acc);
    acc = _mm256_fmadd_pd(w3, _mm256_loadu_pd(d + i), acc);
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < n; ++i) out[i] = w[0] * a[i] + w[1] * b[i] + w[2] * c[i] + w[3] * d[i];
}

Range range_avx2(const double* x, std::size_t n) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  __m256d lo = _mm256_set1_pd(inf);
  __m256d hi = _mm256_set1_pd(-inf);
  __m256d bad = _mm256_setzero_pd();
  const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  const __m256d vinf = _mm256_set1_pd(inf);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xv = _mm256_loadu_pd(x + i);
    lo = _mm256_min_pd(lo, xv);
    hi = _mm256_max_pd(hi, xv);
    // NaN or +-inf: !(|x| < inf)
    bad = _mm256_or_pd(bad, _mm256_cmp_pd(_mm256_and_pd(xv, abs_mask), vinf, _CMP_NLT_UQ));
  }
  alignas(32) double l[4], h[4];
  _mm256_store_pd(l, lo);
  _mm256_store_pd(h, hi);
  Range r{inf, -inf, _mm256_movemask_pd(bad) == 0};
  for (int j = 0; j < 4; ++j) {
    if (l[j] < r.lo) r.lo = l[j];
    if (h[j] > r.hi) r.hi = h[j];
  }
  for (; i < n; ++i) {
    if (!std::isfinite(x[i])) r.finite = false;
    if (x[i] < r.lo) r.lo = x[i];
    if (x[i] > r.hi) r.hi = x[i];
  }
  return r;
}

}  // namespace

const KernelTable* avx2_table_impl() {
  static const KernelTable table{"avx2",   faces_avx2,  cells_avx2, axpy_avx2,
                                 rk4_avx2, blend4_avx2, range_avx2};
  return &table;
}

}  // namespace memtaxis::kernels
