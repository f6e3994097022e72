#pragma once

// Flat-array kernels behind the simulator. Every kernel has a scalar
// reference and, on x86-64, an AVX2/FMA variant chosen at startup.

#include <cstddef>
#include <string>

namespace memtaxis::kernels {

struct RhsCoeffs {
  double d11 = 0, d22 = 0, d21 = 0, xi = 0;
  double beta = 0, m = 0, s = 0;
  double inv_dx2 = 0;
  bool kinetics = true;
};

struct Range {
  double lo = 0;
  double hi = 0;
  bool finite = true;
};

struct KernelTable {
  const char* name;

  // Face fluxes (without the 1/dx factor) for the n-1 interior faces.
  // fu and fv hold n+1 entries; entry i is the face between cells i-1 and i.
  // Entries 0 and n are left untouched and must be zero.
  void (*faces)(const double* u, const double* v, const double* ud, std::size_t n,
                const RhsCoeffs& c, double* fu, double* fv);

  // du = (fu[i+1] - fu[i]) / dx^2 + f(u, v), same for dv with g.
  void (*cells)(const double* u, const double* v, const double* fu, const double* fv,
                std::size_t n, const RhsCoeffs& c, double* du, double* dv);

  // out = x + a * y
  void (*axpy)(double* out, const double* x, double a, const double* y, std::size_t n);

  // out = x + h * (k1 + 2 k2 + 2 k3 + k4)
  void (*rk4_combine)(double* out, const double* x, double h, const double* k1,
                      const double* k2, const double* k3, const double* k4, std::size_t n);

  // out = w0 a + w1 b + w2 c + w3 d
  void (*blend4)(double* out, const double* a, const double* b, const double* c,
                 const double* d, const double* w, std::size_t n);

  Range (*range)(const double* x, std::size_t n);
};

enum class Isa { Scalar, Avx2 };

const KernelTable& scalar_table();

// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table();

// Table picked once per process: MEMTAXIS_SIMD=scalar forces the reference
// path, otherwise the widest supported variant wins.
const KernelTable& active_table();

const KernelTable& table_for(Isa isa);
bool isa_available(Isa isa);
std::string to_string(Isa isa);

}  // namespace memtaxis::kernels
