#pragma once

// Fixed-step classical RK4 for the spectral ODE system, with a step-size
// guard and a trajectory driver that emits diagnostics.

#include "vps/diagnostics.hpp"
#include "vps/errors.hpp"
#include "vps/state.hpp"
#include "vps/vlasov_rhs.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace vps {

struct TimeGrid {
  double dt = 0.0;
  double t_end = 0.0;
  long long n_steps = 0;

  /// n_steps = round(t_end / dt); rejects grids where n_steps * dt misses
  /// t_end by more than 1e-12. t_end = 0 gives zero steps.
  static TimeGrid make(double dt, double t_end) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be a finite positive number, got " + std::to_string(dt));
    if (!(t_end >= 0.0) || !std::isfinite(t_end))
      throw ConfigError("t_end must be a finite non-negative number, got " + std::to_string(t_end));
    TimeGrid g{dt, t_end, std::llround(t_end / dt)};
    if (std::abs(static_cast<double>(g.n_steps) * dt - t_end) > 1e-12 * std::max(1.0, t_end))
      throw ConfigError("t_end = " + std::to_string(t_end) + " is not an integer multiple of dt = " + std::to_string(dt));
    return g;
  }

  double time_at(long long step) const { return static_cast<double>(step) * dt; }
};

inline constexpr double kDefaultCfl = 0.5;

/// Largest characteristic speed used by the step-size guard: |v| on an
/// interval, sqrt(2 N_S + 1) (the largest Hermite node scale) on R.
inline double velocity_scale(const VelocityBasis& basis) {
  if (basis.domain().has_interval()) return basis.domain().v_bound();
  return std::sqrt(2.0 * basis.size() + 1.0);
}

/// dt <= c_cfl / (N_F V + N_S).
inline double cfl_limit(const VelocityBasis& basis, Resolution res, double c_cfl = kDefaultCfl) {
  return c_cfl / (res.n_f * velocity_scale(basis) + res.n_s);
}

/// Thrown when a stage produces non-finite coefficients; carries the last
/// finite state.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& what, SpectralState snapshot, long long step)
      : std::runtime_error(what), snapshot_(std::move(snapshot)), step_(step) {}
  const SpectralState& snapshot() const { return snapshot_; }
  long long step() const { return step_; }

 private:
  SpectralState snapshot_;
  long long step_;
};

/// Reusable stage buffers for step_rk4.
struct Rk4Workspace {
  SpectralState k1, k2, k3, k4, tmp;
};

/// One classical RK4 step; the result carries time t + dt.
inline SpectralState step_rk4(const SpectralState& state, const VlasovRhs& rhs, double dt, Rk4Workspace& ws) {
  if (!(dt > 0.0)) throw ContractViolation("step_rk4: dt must be positive");
  if (!state.all_finite()) throw BlowUpError("step_rk4: non-finite input state", state, 0);
  const double t = state.time();

  rhs.evaluate(state, ws.k1);
  ws.tmp = state;
  ws.tmp.axpy(0.5 * dt, ws.k1);
  ws.tmp.set_time(t + 0.5 * dt);
  rhs.evaluate(ws.tmp, ws.k2);
  ws.tmp = state;
  ws.tmp.axpy(0.5 * dt, ws.k2);
  ws.tmp.set_time(t + 0.5 * dt);
  rhs.evaluate(ws.tmp, ws.k3);
  ws.tmp = state;
  ws.tmp.axpy(dt, ws.k3);
  ws.tmp.set_time(t + dt);
  rhs.evaluate(ws.tmp, ws.k4);

  SpectralState out = state;
  const auto c1 = ws.k1.coefficients();
  const auto c2 = ws.k2.coefficients();
  const auto c3 = ws.k3.coefficients();
  const auto c4 = ws.k4.coefficients();
  auto y = out.coefficients();
  const double w = dt / 6.0;
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += w * (c1[i] + 2.0 * c2[i] + 2.0 * c3[i] + c4[i]);
  out.set_time(t + dt);
  if (!out.all_finite()) throw BlowUpError("step_rk4: non-finite coefficients at t=" + std::to_string(t + dt), state, 0);
  return out;
}

inline SpectralState step_rk4(const SpectralState& state, const VlasovRhs& rhs, double dt) {
  Rk4Workspace ws;
  return step_rk4(state, rhs, dt, ws);
}

/// ||C_{n+1}||^2 - ||C_n||^2 for the step whose stages sit in `ws`, written
/// with Re<Y_i, k_i> = 0 (the conservation identity at each stage input Y_i)
/// so that only O(dt^2) terms remain. This is the time-discretization part of
/// the L2 drift, free of the cancellation that swamps ||C||^2 differences.
inline double rk4_l2_increment(const Rk4Workspace& ws, double dt) {
  const double a = inner(ws.k1, ws.k2).real();
  const double b = inner(ws.k2, ws.k3).real();
  const double c = inner(ws.k3, ws.k4).real();
  SpectralState sum = ws.k1;
  sum.axpy(2.0, ws.k2);
  sum.axpy(2.0, ws.k3);
  sum += ws.k4;
  return -(dt * dt / 3.0) * (a + b + c) + (dt * dt / 36.0) * l2_norm_sq(sum);
}

using DiagnosticsSink = std::function<void(const DiagnosticsRecord&)>;

struct RunResult {
  SpectralState final_state;
  std::vector<DiagnosticsRecord> records;
  double l2_drift_max = 0.0;              ///< max_t |l2_sq(t) - l2_sq(0)| / l2_sq(0), every step
  double discretization_drift_max = 0.0;  ///< same, from accumulated rk4_l2_increment
};

/// Advance `initial` over `grid`, recording diagnostics at step 0, every
/// `stride` steps, and at the final step. Times are t0 + i dt so that a run
/// split in two pieces reproduces the single run bitwise.
inline RunResult run(const SpectralState& initial, const TimeGrid& grid, const VlasovRhs& rhs, int stride = 1,
                     const DiagnosticsSink& sink = {}) {
  if (stride < 1) throw ConfigError("stride must be >= 1, got " + std::to_string(stride));
  if (!(initial.resolution() == rhs.resolution()))
    throw ContractViolation("run: initial state resolution does not match the RHS");
  RunResult result;
  auto emit = [&](const SpectralState& s) {
    DiagnosticsRecord r = compute_diagnostics(s, rhs);
    if (sink) sink(r);
    result.records.push_back(r);
  };
  const double t0 = initial.time();
  const double l2_0 = l2_norm_sq(initial);
  const double scale = l2_0 > 0.0 ? 1.0 / l2_0 : 1.0;
  SpectralState state = initial;
  emit(state);
  Rk4Workspace ws;
  double accumulated = 0.0;
  for (long long i = 1; i <= grid.n_steps; ++i) {
    try {
      state = step_rk4(state, rhs, grid.dt, ws);
    } catch (const BlowUpError& e) {
      throw BlowUpError(e.what(), e.snapshot(), i);
    }
    state.set_time(t0 + grid.time_at(i));
    accumulated += rk4_l2_increment(ws, grid.dt);
    result.discretization_drift_max = std::max(result.discretization_drift_max, std::abs(accumulated) * scale);
    result.l2_drift_max = std::max(result.l2_drift_max, std::abs(l2_norm_sq(state) - l2_0) * scale);
    if (i % stride == 0 || i == grid.n_steps) emit(state);
  }
  result.final_state = std::move(state);
  return result;
}

/// Final state only, without diagnostics.
inline SpectralState advance(const SpectralState& initial, const TimeGrid& grid, const VlasovRhs& rhs) {
  if (!(initial.resolution() == rhs.resolution()))
    throw ContractViolation("advance: initial state resolution does not match the RHS");
  const double t0 = initial.time();
  SpectralState state = initial;
  Rk4Workspace ws;
  for (long long i = 1; i <= grid.n_steps; ++i) {
    try {
      state = step_rk4(state, rhs, grid.dt, ws);
    } catch (const BlowUpError& e) {
      throw BlowUpError(e.what(), e.snapshot(), i);
    }
    state.set_time(t0 + grid.time_at(i));
  }
  return state;
}

}  // namespace vps
