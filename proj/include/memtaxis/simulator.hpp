#pragma once

// Method-of-lines integration of the delayed predator-prey system on
// (0, ell*pi) with zero-flux boundaries. Cell-centered finite volumes in
// space, classical RK4 in time with dt = tau / M.

#include <cstddef>
#include <vector>

#include "memtaxis/kernels/kernels.hpp"
#include "memtaxis/model.hpp"

namespace memtaxis {

struct Grid {
  int n_cells = 0;
  double ell = 1;
  double length = 0;  ///< ell * pi
  double dx = 0;

  static Grid make(int n_cells, double ell);
  double x(int i) const { return (i + 0.5) * dx; }
  int cell_at(double x) const;
};

struct FieldPair {
  std::vector<double> u;
  std::vector<double> v;
};

/// u0 = u* + amp_u cos(mode x / ell), v0 = v* + amp_v cos(mode x / ell),
/// held constant on [-tau, 0].
struct InitialCondition {
  int mode = 1;
  double amp_u = -0.1;
  double amp_v = 0.1;
};

struct SimConfig {
  KineticParams kin;
  TransportParams tr;
  double tau = 0;
  int n_cells = 200;
  double dt = 0;        ///< 0 picks stable_dt; always snapped to tau / M
  double t_end = 2000;
  int record_every = 0; ///< steps between snapshots, 0 keeps at most 500 snapshots
  int trace_every = 1;  ///< steps between probe samples
  double probe_x = 0;
  InitialCondition ic;
  bool kinetics = true; ///< false drops f and g, leaving pure transport
};

struct Trajectory {
  Grid grid;
  SteadyState steady;
  double tau = 0;
  double dt = 0;
  int delay_steps = 0;
  long long steps = 0;
  int record_every = 1;
  std::vector<double> times;
  std::vector<FieldPair> snapshots;
  int probe_cell = 0;
  std::vector<double> trace_t;
  std::vector<double> probe_u;
  std::vector<double> probe_v;
};

/// Heuristic bound safety dx^2 / (2 (d11 + d22 + xi v_max + d21 u_max)) with
/// safety 0.4 and u_max = 4 u*, v_max = 4 v*.
double cfl_bound(const KineticParams& kin, const TransportParams& tr, const Grid& grid);

/// Step used when SimConfig::dt is zero: 80% of the RK4 real-axis stability
/// limit for the stiffest diffusion mode.
double stable_dt(const TransportParams& tr, const Grid& grid);

/// Largest dt accepted by run().
double max_dt(const TransportParams& tr, const Grid& grid);

/// The step run() will use: the requested (or stable) dt snapped down to
/// tau / M with M >= 3. Throws InvalidArgument above max_dt.
double resolved_dt(const SimConfig& cfg);

kernels::RhsCoeffs rhs_coeffs(const KineticParams& kin, const TransportParams& tr,
                              const Grid& grid, bool kinetics = true);

/// Conservative semi-discrete right-hand side. Throws PositivityLoss when
/// some u <= 1e-10.
FieldPair rhs(const FieldPair& state, const std::vector<double>& delayed_u,
              const KineticParams& kin, const TransportParams& tr, const Grid& grid,
              bool kinetics = true);

FieldPair initial_field(const SimConfig& cfg, const Grid& grid, const SteadyState& ss);

/// Ring of past u levels and the stepper that owns it. Level j holds u at
/// t = j dt; levels <= 0 are the initial history.
class DelayIntegrator {
 public:
  DelayIntegrator(const SimConfig& cfg, const kernels::KernelTable& table);

  void step();
  double time() const { return static_cast<double>(level_) * dt_; }
  long long level() const { return level_; }
  double dt() const { return dt_; }
  int delay_steps() const { return M_; }
  const Grid& grid() const { return grid_; }
  const SteadyState& steady() const { return steady_; }
  FieldPair state() const;
  const double* u() const { return y_.data(); }
  const double* v() const { return y_.data() + n_; }

  /// u(., (j + 1/2) dt) by four-point Lagrange interpolation inside the
  /// smooth segment [kM, (k+1)M] that contains the midpoint.
  void delayed_midpoint(long long j, double* out) const;
  const double* level_u(long long j) const;

 private:
  void eval(const double* y, const double* ud, double* k);
  void store_level();

  Grid grid_;
  SteadyState steady_;
  kernels::RhsCoeffs coeffs_;
  const kernels::KernelTable* table_;
  std::size_t n_ = 0;
  int M_ = 0;
  double dt_ = 0;
  long long level_ = 0;

  std::vector<double> y_, ystage_, k1_, k2_, k3_, k4_;
  std::vector<double> fu_, fv_, mid_;
  std::vector<double> u0_;
  std::vector<double> ring_;  ///< (M + 3) levels of n_ values
  std::size_t ring_levels_ = 0;
};

/// Integrates to t_end and records snapshots and probe traces. Throws
/// PositivityLoss or NonFinite with the failure time and worst cell.
Trajectory run(const SimConfig& cfg);
Trajectory run(const SimConfig& cfg, const kernels::KernelTable& table);

}  // namespace memtaxis
