#include "memtaxis/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "memtaxis/errors.hpp"

namespace memtaxis {

namespace {

constexpr double kUFloor = 1e-10;
// Real-axis extent of the classical RK4 stability region.
constexpr double kRk4RealLimit = 2.785;
// Kinetic rates at these parameter magnitudes are O(1).
constexpr double kKineticDtCap = 0.25;

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void check_state(const kernels::KernelTable& table, const double* u, const double* v,
                 std::size_t n, double t) {
  const kernels::Range ru = table.range(u, n);
  const kernels::Range rv = table.range(v, n);
  if (!ru.finite || !rv.finite) {
    std::size_t worst = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(u[i]) || !std::isfinite(v[i])) {
        worst = i;
        break;
      }
    }
    throw Error(ErrorCode::NonFinite,
                fmt("non-finite state at t=%.6g, cell %d", t, static_cast<int>(worst)));
  }
  if (ru.lo <= kUFloor) {
    const auto worst = std::min_element(u, u + n) - u;
    throw Error(ErrorCode::PositivityLoss,
                fmt("t=%.6g, cell %d, u=%.6g", t, static_cast<int>(worst), ru.lo));
  }
}

}  // namespace

Grid Grid::make(int n_cells, double ell) {
  if (n_cells < 16) throw Error(ErrorCode::InvalidArgument, "n_cells must be at least 16");
  if (!(ell > 0) || !std::isfinite(ell)) throw Error(ErrorCode::InvalidArgument, "ell must be positive");
  Grid g;
  g.n_cells = n_cells;
  g.ell = ell;
  g.length = ell * std::numbers::pi;
  g.dx = g.length / n_cells;
  return g;
}

int Grid::cell_at(double x) const {
  const int i = static_cast<int>(std::floor(x / dx));
  return std::clamp(i, 0, n_cells - 1);
}

double cfl_bound(const KineticParams& kin, const TransportParams& tr, const Grid& grid) {
  const SteadyState ss = steady_state(kin);
  const double u_max = 4.0 * ss.u_star;
  const double v_max = 4.0 * ss.v_star;
  return 0.4 * grid.dx * grid.dx / (2.0 * (tr.d11 + tr.d22 + tr.xi * v_max + tr.d21 * u_max));
}

double max_dt(const TransportParams& tr, const Grid& grid) {
  const double d = std::max(tr.d11, tr.d22);
  if (d <= 0) return kKineticDtCap;
  return std::min(kKineticDtCap, kRk4RealLimit * grid.dx * grid.dx / (4.0 * d));
}

double stable_dt(const TransportParams& tr, const Grid& grid) { return 0.8 * max_dt(tr, grid); }

double resolved_dt(const SimConfig& cfg) {
  if (!(cfg.tau > 0) || !std::isfinite(cfg.tau)) {
    throw Error(ErrorCode::InvalidArgument, "simulation needs a positive finite tau");
  }
  const Grid grid = Grid::make(cfg.n_cells, cfg.tr.ell);
  const double limit = max_dt(cfg.tr, grid);
  const double requested = cfg.dt > 0 ? cfg.dt : stable_dt(cfg.tr, grid);
  if (!std::isfinite(requested)) throw Error(ErrorCode::InvalidArgument, "dt must be finite");
  // Interpolation stencils need at least four levels per delay interval.
  const int M = std::max(3, static_cast<int>(std::ceil(cfg.tau / requested - 1e-9)));
  const double dt = cfg.tau / M;
  if (dt > limit) {
    throw Error(ErrorCode::InvalidArgument,
                fmt("dt=%.6g exceeds the RK4 diffusion limit %.6g", dt, limit));
  }
  return dt;
}

kernels::RhsCoeffs rhs_coeffs(const KineticParams& kin, const TransportParams& tr,
                              const Grid& grid, bool kinetics) {
  kernels::RhsCoeffs c;
  c.d11 = tr.d11;
  c.d22 = tr.d22;
  c.d21 = tr.d21;
  c.xi = tr.xi;
  c.beta = kin.beta;
  c.m = kin.m;
  c.s = kin.s;
  c.inv_dx2 = 1.0 / (grid.dx * grid.dx);
  c.kinetics = kinetics;
  return c;
}

FieldPair rhs(const FieldPair& state, const std::vector<double>& delayed_u,
              const KineticParams& kin, const TransportParams& tr, const Grid& grid,
              bool kinetics) {
  const std::size_t n = static_cast<std::size_t>(grid.n_cells);
  if (state.u.size() != n || state.v.size() != n || delayed_u.size() != n) {
    throw Error(ErrorCode::InvalidArgument, "field sizes do not match the grid");
  }
  const auto& table = kernels::active_table();
  check_state(table, state.u.data(), state.v.data(), n, 0.0);
  const auto c = rhs_coeffs(kin, tr, grid, kinetics);
  std::vector<double> fu(n + 1, 0.0), fv(n + 1, 0.0);
  FieldPair out{std::vector<double>(n), std::vector<double>(n)};
  table.faces(state.u.data(), state.v.data(), delayed_u.data(), n, c, fu.data(), fv.data());
  table.cells(state.u.data(), state.v.data(), fu.data(), fv.data(), n, c, out.u.data(),
              out.v.data());
  return out;
}

FieldPair initial_field(const SimConfig& cfg, const Grid& grid, const SteadyState& ss) {
  FieldPair f{std::vector<double>(grid.n_cells), std::vector<double>(grid.n_cells)};
  for (int i = 0; i < grid.n_cells; ++i) {
    const double c = std::cos(cfg.ic.mode * grid.x(i) / grid.ell);
    f.u[i] = ss.u_star + cfg.ic.amp_u * c;
    f.v[i] = ss.v_star + cfg.ic.amp_v * c;
  }
  return f;
}

DelayIntegrator::DelayIntegrator(const SimConfig& cfg, const kernels::KernelTable& table)
    : table_(&table) {
  cfg.kin.validate();
  cfg.tr.validate();
  if (cfg.ic.mode < 0) throw Error(ErrorCode::InvalidArgument, "ic mode must be >= 0");
  grid_ = Grid::make(cfg.n_cells, cfg.tr.ell);
  steady_ = steady_state(cfg.kin);
  coeffs_ = rhs_coeffs(cfg.kin, cfg.tr, grid_, cfg.kinetics);
  n_ = static_cast<std::size_t>(grid_.n_cells);

  dt_ = resolved_dt(cfg);
  M_ = static_cast<int>(std::lround(cfg.tau / dt_));

  const FieldPair f0 = initial_field(cfg, grid_, steady_);
  if (*std::min_element(f0.u.begin(), f0.u.end()) <= kUFloor ||
      *std::min_element(f0.v.begin(), f0.v.end()) < 0) {
    throw Error(ErrorCode::InvalidArgument, "initial condition must keep u > 0 and v >= 0");
  }
  y_.resize(2 * n_);
  std::copy(f0.u.begin(), f0.u.end(), y_.begin());
  std::copy(f0.v.begin(), f0.v.end(), y_.begin() + n_);
  u0_ = f0.u;
  ystage_.resize(2 * n_);
  k1_.resize(2 * n_);
  k2_.resize(2 * n_);
  k3_.resize(2 * n_);
  k4_.resize(2 * n_);
  fu_.assign(n_ + 1, 0.0);
  fv_.assign(n_ + 1, 0.0);
  mid_.resize(n_);
  ring_levels_ = static_cast<std::size_t>(M_) + 3;
  ring_.assign(ring_levels_ * n_, 0.0);
}

FieldPair DelayIntegrator::state() const {
  return {std::vector<double>(y_.begin(), y_.begin() + n_),
          std::vector<double>(y_.begin() + n_, y_.end())};
}

const double* DelayIntegrator::level_u(long long j) const {
  if (j <= 0) return u0_.data();
  if (j == level_) return y_.data();
  const auto r = static_cast<long long>(ring_levels_);
  return ring_.data() + static_cast<std::size_t>(((j % r) + r) % r) * n_;
}

void DelayIntegrator::delayed_midpoint(long long j, double* out) const {
  if (j + 1 <= 0) {
    std::copy(u0_.begin(), u0_.end(), out);
    return;
  }
  // The solution is only piecewise smooth: derivatives jump at multiples of tau.
  const long long seg = (j >= 0 ? j / M_ : -((-j + M_ - 1) / M_)) * M_;
  static constexpr double centered[4] = {-1.0 / 16, 9.0 / 16, 9.0 / 16, -1.0 / 16};
  static constexpr double forward[4] = {5.0 / 16, 15.0 / 16, -5.0 / 16, 1.0 / 16};
  static constexpr double backward[4] = {1.0 / 16, -5.0 / 16, 15.0 / 16, 5.0 / 16};
  long long first = j - 1;
  const double* w = centered;
  if (j - 1 < seg) {
    first = j;
    w = forward;
  } else if (j + 2 > seg + M_) {
    first = j - 2;
    w = backward;
  }
  table_->blend4(out, level_u(first), level_u(first + 1), level_u(first + 2),
                 level_u(first + 3), w, n_);
}

void DelayIntegrator::eval(const double* y, const double* ud, double* k) {
  table_->faces(y, y + n_, ud, n_, coeffs_, fu_.data(), fv_.data());
  table_->cells(y, y + n_, fu_.data(), fv_.data(), n_, coeffs_, k, k + n_);
}

void DelayIntegrator::store_level() {
  const auto r = static_cast<long long>(ring_levels_);
  double* slot = ring_.data() + static_cast<std::size_t>(level_ % r) * n_;
  std::copy(y_.begin(), y_.begin() + n_, slot);
}

void DelayIntegrator::step() {
  const std::size_t n2 = 2 * n_;
  const long long j = level_ - M_;
  const double* ud0 = level_u(j);
  const double* ud1 = level_u(j + 1);
  delayed_midpoint(j, mid_.data());

  eval(y_.data(), ud0, k1_.data());
  table_->axpy(ystage_.data(), y_.data(), 0.5 * dt_, k1_.data(), n2);
  eval(ystage_.data(), mid_.data(), k2_.data());
  table_->axpy(ystage_.data(), y_.data(), 0.5 * dt_, k2_.data(), n2);
  eval(ystage_.data(), mid_.data(), k3_.data());
  table_->axpy(ystage_.data(), y_.data(), dt_, k3_.data(), n2);
  eval(ystage_.data(), ud1, k4_.data());
  table_->rk4_combine(y_.data(), y_.data(), dt_ / 6.0, k1_.data(), k2_.data(), k3_.data(),
                      k4_.data(), n2);
  ++level_;
  check_state(*table_, u(), v(), n_, time());
  store_level();
}

Trajectory run(const SimConfig& cfg) { return run(cfg, kernels::active_table()); }

Trajectory run(const SimConfig& cfg, const kernels::KernelTable& table) {
  if (!(cfg.t_end > 0) || !std::isfinite(cfg.t_end)) {
    throw Error(ErrorCode::InvalidArgument, "t_end must be positive");
  }
  if (cfg.record_every < 0 || cfg.trace_every < 1) {
    throw Error(ErrorCode::InvalidArgument, "record_every >= 0 and trace_every >= 1 required");
  }
  DelayIntegrator integ(cfg, table);

  Trajectory tr;
  tr.grid = integ.grid();
  tr.steady = integ.steady();
  tr.tau = cfg.tau;
  tr.dt = integ.dt();
  tr.delay_steps = integ.delay_steps();
  tr.steps = static_cast<long long>(std::ceil(cfg.t_end / tr.dt - 1e-9));
  tr.record_every = cfg.record_every > 0
                        ? cfg.record_every
                        : static_cast<int>(std::max<long long>(1, (tr.steps + 499) / 500));
  tr.probe_cell = tr.grid.cell_at(cfg.probe_x);

  const auto record = [&] {
    const long long k = integ.level();
    if (k % tr.record_every == 0) {
      tr.times.push_back(integ.time());
      tr.snapshots.push_back(integ.state());
    }
    if (k % cfg.trace_every == 0) {
      tr.trace_t.push_back(integ.time());
      tr.probe_u.push_back(integ.u()[tr.probe_cell]);
      tr.probe_v.push_back(integ.v()[tr.probe_cell]);
    }
  };
  tr.times.reserve(static_cast<std::size_t>(tr.steps / tr.record_every + 1));
  record();
  for (long long k = 0; k < tr.steps; ++k) {
    integ.step();
    record();
  }
  return tr;
}

}  // namespace memtaxis
