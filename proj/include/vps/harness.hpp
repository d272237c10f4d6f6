#pragma once

// Study drivers behind the command-line tool: single runs, self-convergence
// sweeps, projection-rate checks, inverse-inequality checks and kernel checks.
// Each returns a plain report; report.hpp serializes them.

#include "vps/basis.hpp"
#include "vps/config.hpp"
#include "vps/diagnostics.hpp"
#include "vps/integrator.hpp"
#include "vps/poisson.hpp"
#include "vps/projection.hpp"
#include "vps/vlasov_rhs.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <optional>
#include <string>
#include <vector>

namespace vps {

namespace harness_detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline std::vector<int> powers_of_two(int from, int to) {
  std::vector<int> out;
  for (int n = from; n <= to; n *= 2) out.push_back(n);
  return out;
}

}  // namespace harness_detail

/// Everything needed to integrate one configuration at one resolution.
struct Problem {
  Resolution res;
  VlasovRhs rhs;
  SpectralState initial;
};

inline Problem make_problem(const RunConfig& cfg, std::optional<Resolution> res_override = {}) {
  const Resolution res = res_override.value_or(cfg.resolution());
  res.validate();
  VelocityBasis basis(cfg.basis_kind, cfg.domain(), res.n_s);
  const PhaseSpaceFunction f0 = builtin_initial_condition(cfg.initial_condition, basis);
  SpectralState initial = project_initial(f0, basis, res);
  VlasovRhs rhs(std::move(basis), res, cfg.penalty());
  return Problem{res, std::move(rhs), std::move(initial)};
}

/// True when the semi-discrete system conserves ||f^N||^2 exactly: penalty on
/// with a Legendre basis, or Hermite on R without penalty.
inline bool is_conservative(const RunConfig& cfg) {
  if (cfg.basis_kind == BasisKind::Legendre) return cfg.penalty_enabled;
  return cfg.v_unbounded && !cfg.penalty_enabled;
}

// ---------------------------------------------------------------------------
// run

struct RunReport {
  RunConfig config;
  RunResult result;
  long long n_steps = 0;
  double cfl_limit = 0.0;
  bool cfl_exceeded = false;
  double wall_time_s = 0.0;
  std::vector<std::string> violations;
};

/// Relative L2 drift above which a conservative run is flagged.
inline constexpr double kRunDriftTolerance = 1e-6;
/// Largest admissible Hermitian-symmetry residual during a run.
inline constexpr double kHermitianTolerance = 1e-13;

inline RunReport run_study(const RunConfig& cfg, const DiagnosticsSink& sink = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  RunReport rep;
  rep.config = cfg;
  const TimeGrid grid = TimeGrid::make(cfg.dt, cfg.t_end);
  rep.n_steps = grid.n_steps;
  Problem p = make_problem(cfg);
  rep.cfl_limit = cfl_limit(p.rhs.basis(), p.res);
  rep.cfl_exceeded = cfg.dt > rep.cfl_limit;
  try {
    rep.result = run(p.initial, grid, p.rhs, cfg.stride, sink);
  } catch (const BlowUpError& e) {
    rep.result.final_state = e.snapshot();
    rep.violations.push_back(std::string("blow-up at step ") + std::to_string(e.step()) + ": " + e.what());
  }
  for (const auto& r : rep.result.records) {
    if (r.hermitian_residual > kHermitianTolerance) {
      rep.violations.push_back("hermitian residual " + config_detail::fmt(r.hermitian_residual) + " at t = " +
                               config_detail::fmt(r.t));
      break;
    }
  }
  if (is_conservative(cfg) && rep.result.l2_drift_max > kRunDriftTolerance)
    rep.violations.push_back("relative L2 drift " + config_detail::fmt(rep.result.l2_drift_max) + " exceeds " +
                             config_detail::fmt(kRunDriftTolerance));
  rep.wall_time_s = harness_detail::seconds_since(t0);
  return rep;
}

// ---------------------------------------------------------------------------
// converge

struct ConvergenceOptions {
  std::vector<int> sweep{8, 16, 32};
  int ref_mult = 2;
  int ref_dt_divisor = 4;
  bool parallel = true;
};

struct ConvergenceReport {
  RunConfig config;
  ConvergenceOptions options;
  std::vector<ConvergenceSample> samples;
  Resolution reference{};
  double reference_dt = 0.0;
  double reference_runtime_s = 0.0;
  bool strictly_decreasing = false;
  double fitted_slope = 0.0;  ///< slope of log err_l2 vs log N
  std::vector<std::string> violations;
};

/// Self-convergence against a reference run at ref_mult * max(sweep) modes
/// and dt / ref_dt_divisor. The sweep point N runs at (N_S, N_F) = (N, N).
/// Only final states enter, so results do not depend on stride or outputs.
inline ConvergenceReport convergence_study(const RunConfig& cfg, const ConvergenceOptions& opt) {
  if (opt.sweep.empty()) throw ConfigError("converge: empty sweep");
  for (int n : opt.sweep)
    if (n < 1) throw ConfigError("converge: sweep entries must be >= 1, got " + std::to_string(n));
  if (opt.ref_mult < 1) throw ConfigError("converge: ref-mult must be >= 1");
  if (opt.ref_dt_divisor < 1) throw ConfigError("converge: reference dt divisor must be >= 1");

  ConvergenceReport rep;
  rep.config = cfg;
  rep.options = opt;
  const int n_max = *std::max_element(opt.sweep.begin(), opt.sweep.end());
  rep.reference = {opt.ref_mult * n_max, opt.ref_mult * n_max};
  rep.reference_dt = cfg.dt / opt.ref_dt_divisor;

  struct Timed {
    SpectralState state;
    double runtime_s;
  };
  auto solve = [&cfg](Resolution res, double dt) {
    const auto t0 = std::chrono::steady_clock::now();
    Problem p = make_problem(cfg, res);
    SpectralState s = advance(p.initial, TimeGrid::make(dt, cfg.t_end), p.rhs);
    return Timed{std::move(s), harness_detail::seconds_since(t0)};
  };

  // Each task owns its problem and state; results are gathered in sweep order.
  const auto policy = opt.parallel ? std::launch::async : std::launch::deferred;
  auto ref_future = std::async(policy, solve, rep.reference, rep.reference_dt);
  std::vector<std::future<Timed>> futures;
  for (int n : opt.sweep) futures.push_back(std::async(policy, solve, Resolution{n, n}, cfg.dt));
  const Timed ref = ref_future.get();
  rep.reference_runtime_s = ref.runtime_s;

  const VelocityBasis ref_basis(cfg.basis_kind, cfg.domain(), rep.reference.n_s);
  std::vector<double> ns, errs;
  for (std::size_t i = 0; i < futures.size(); ++i) {
    const Timed t = futures[i].get();
    ConvergenceSample s;
    s.n_s = opt.sweep[i];
    s.n_f = opt.sweep[i];
    s.err_l2 = state_l2_error(t.state, ref.state);
    s.err_field = field_error(t.state, ref.state, ref_basis);
    s.runtime_s = t.runtime_s;
    rep.samples.push_back(s);
    ns.push_back(s.n_s);
    errs.push_back(std::max(s.err_l2, 1e-300));
  }
  rep.strictly_decreasing = true;
  for (std::size_t i = 1; i < rep.samples.size(); ++i)
    if (!(rep.samples[i].err_l2 < rep.samples[i - 1].err_l2)) rep.strictly_decreasing = false;
  if (ns.size() >= 2) rep.fitted_slope = fit_log_log_slope(ns, errs);
  for (const auto& s : rep.samples)
    if (!std::isfinite(s.err_l2) || !std::isfinite(s.err_field))
      rep.violations.push_back("non-finite error at N = " + std::to_string(s.n_s));
  if (!rep.strictly_decreasing) rep.violations.push_back("err_l2 is not strictly decreasing across the sweep");
  return rep;
}

// ---------------------------------------------------------------------------
// project-check

struct ProjectionSeries {
  std::string name;            ///< "analytic" or "kink"
  std::vector<int> n;          ///< low resolutions N (N_S = N, N_F fixed or = N)
  std::vector<double> err_l2;  ///< ||f - P^N f||_{L2}
  std::vector<double> err_h1;
  std::vector<double> err_h2;
  std::vector<double> pair_slopes;  ///< log2(err(N)/err(2N)) negated, per doubling
  double fitted_slope = 0.0;
  double expected_slope = 0.0;  ///< 0 when no algebraic prediction applies
};

struct ProjectionReport {
  BasisKind kind = BasisKind::Legendre;
  Domain domain;
  ProjectionSeries analytic;
  ProjectionSeries kink;
  bool analytic_steepens = false;
  bool kink_rate_ok = false;
  std::vector<std::string> violations;
};

/// Sobolev regularity m of |v - v0|^p (in H^{p + 1/2 - eps}); the test uses
/// p = 7/2, so m = 4.
inline constexpr double kKinkPower = 3.5;
inline constexpr double kKinkRegularity = kKinkPower + 0.5;
inline constexpr double kRateTolerance = 0.5;

/// Kink test function for `kind` on `domain`: (1 + cos(x)/2) |v - v0|^{7/2},
/// times e^{-v^2/2} on R. Returns the function and the velocity breakpoints.
inline std::pair<PhaseSpaceFunction, std::vector<double>> kink_test_function(BasisKind kind, const Domain& domain) {
  if (kind == BasisKind::Legendre) {
    const double v0 = domain.v_min + 0.54 * domain.v_length();
    PhaseSpaceFunction f = [v0](double x, double v) {
      return (1.0 + 0.5 * std::cos(x)) * std::pow(std::abs(v - v0), kKinkPower);
    };
    return {f, {domain.v_min, v0, domain.v_max}};
  }
  const double v0 = 0.5;
  PhaseSpaceFunction f = [v0](double x, double v) {
    return (1.0 + 0.5 * std::cos(x)) * std::pow(std::abs(v - v0), kKinkPower) * std::exp(-0.5 * v * v);
  };
  return {f, {-14.0, v0, 14.0}};
}

/// Analytic test function: e^{sin x} e^{-v^2/2} for Legendre. The Gaussian is
/// phi_0 itself in the Hermite basis, so Hermite uses e^{sin x} e^{-v^2/2} cos(3v).
inline PhaseSpaceFunction analytic_test_function(BasisKind kind) {
  if (kind == BasisKind::Legendre)
    return [](double x, double v) { return std::exp(std::sin(x)) * std::exp(-0.5 * v * v); };
  return [](double x, double v) { return std::exp(std::sin(x)) * std::exp(-0.5 * v * v) * std::cos(3.0 * v); };
}

/// Predicted algebraic L2 projection rate for regularity m: N^{-m} for
/// Legendre, N^{-m/2} for Hermite.
inline double predicted_projection_slope(BasisKind kind, double m) {
  return kind == BasisKind::Legendre ? -m : -0.5 * m;
}

inline ProjectionReport projection_study(BasisKind kind, const Domain& domain) {
  ProjectionReport rep;
  rep.kind = kind;
  rep.domain = domain;
  auto fill = [](ProjectionSeries& s, const std::vector<ProjectionErrors>& errs) {
    for (const auto& e : errs) {
      s.err_l2.push_back(e.l2);
      s.err_h1.push_back(e.h1);
      s.err_h2.push_back(e.h2);
    }
    std::vector<double> ns(s.n.begin(), s.n.end());
    for (std::size_t i = 1; i < ns.size(); ++i)
      s.pair_slopes.push_back(std::log(s.err_l2[i] / s.err_l2[i - 1]) / std::log(ns[i] / ns[i - 1]));
    s.fitted_slope = fit_log_log_slope(ns, s.err_l2);
  };

  // Analytic: errors at (N, N) against (128, 64).
  {
    ProjectionSeries& s = rep.analytic;
    s.name = "analytic";
    s.n = {4, 8, 16, 32};
    std::vector<Resolution> lows;
    for (int n : s.n) lows.push_back({n, n});
    fill(s, projection_error_sweep(analytic_test_function(kind), kind, domain, {128, 64}, lows));
    rep.analytic_steepens = true;
    for (std::size_t i = 1; i < s.pair_slopes.size(); ++i)
      if (!(s.pair_slopes[i] < s.pair_slopes[i - 1])) rep.analytic_steepens = false;
  }
  // Kink: algebraic rate from the limited velocity regularity. x-dependence is
  // a single cosine, so N_F = 1 is exact.
  {
    ProjectionSeries& s = rep.kink;
    s.name = "kink";
    s.n = {16, 32, 64, 128};
    s.expected_slope = predicted_projection_slope(kind, kKinkRegularity);
    std::vector<Resolution> lows;
    for (int n : s.n) lows.push_back({n, 1});
    const auto [f, breaks] = kink_test_function(kind, domain);
    ProjectionOptions opt;
    opt.v_breakpoints = breaks;
    const Resolution hi{kind == BasisKind::Legendre ? 512 : 1024, 1};
    fill(s, projection_error_sweep(f, kind, domain, hi, lows, opt));
    rep.kink_rate_ok = std::abs(s.fitted_slope - s.expected_slope) <= kRateTolerance;
  }
  if (!rep.analytic_steepens) rep.violations.push_back("analytic projection error slope does not steepen");
  if (!rep.kink_rate_ok)
    rep.violations.push_back("kink projection slope " + config_detail::fmt(rep.kink.fitted_slope) + " is not within " +
                             config_detail::fmt(kRateTolerance) + " of " + config_detail::fmt(rep.kink.expected_slope));
  for (std::size_t i = 1; i < rep.kink.err_l2.size(); ++i)
    if (rep.kink.err_l2[i] > rep.kink.err_l2[i - 1]) rep.violations.push_back("kink projection error increases with N");
  return rep;
}

// ---------------------------------------------------------------------------
// invineq-check

struct InverseInequalityReport {
  InverseInequalityTable table;
  std::vector<int> fourier_k;
  std::vector<double> fourier_ratio;
  bool exponent_ok = false;
  bool fourier_exact = false;
  std::vector<std::string> violations;
};

/// Default velocity domain for the check: R for Hermite, [-1, 1] for Legendre.
inline Domain reference_domain(BasisKind kind) {
  return kind == BasisKind::Hermite ? Domain::real_line() : Domain::bounded(-1.0, 1.0);
}

inline InverseInequalityReport inverse_inequality_study(BasisKind kind, int max_n, unsigned seed = 12345) {
  if (max_n < 16) throw ConfigError("invineq-check: max-n must be >= 16, got " + std::to_string(max_n));
  InverseInequalityReport rep;
  const std::vector<int> grid = harness_detail::powers_of_two(8, max_n);
  rep.table = inverse_inequality_ratios(kind, reference_domain(kind), grid, seed);
  const double e = rep.table.fitted_exponent;
  rep.exponent_ok = kind == BasisKind::Hermite ? (e >= 0.4 && e <= 0.6) : (e <= 2.2);
  if (!rep.exponent_ok)
    rep.violations.push_back("fitted exponent " + config_detail::fmt(e) + " outside the admissible range for " +
                             std::string(to_string(kind)));
  for (const auto& row : rep.table.rows)
    if (row.sampled_ratio > row.max_ratio * (1.0 + 1e-12))
      rep.violations.push_back("sampled ratio exceeds the operator norm at N = " + std::to_string(row.n));

  // Fourier: single mode k, the ratio must be exactly |k|.
  const int nf = 16;
  rep.fourier_exact = true;
  for (int k = -nf; k <= nf; ++k) {
    std::vector<cplx> c(2 * nf + 1);
    c[k + nf] = cplx(1.0, 0.0);
    const double r = fourier_derivative_ratio(c, nf);
    rep.fourier_k.push_back(k);
    rep.fourier_ratio.push_back(r);
    if (r != std::abs(static_cast<double>(k))) rep.fourier_exact = false;
  }
  if (!rep.fourier_exact) rep.violations.push_back("Fourier single-mode ratio differs from |k|");
  return rep;
}

// ---------------------------------------------------------------------------
// kernel-check

struct KernelReport {
  std::vector<KernelNorms> rows;
  std::vector<std::string> violations;
};

inline KernelReport kernel_study(std::span<const int> n_f_values) {
  KernelReport rep;
  for (int nf : n_f_values) {
    const KernelNorms k = kernel_norms(nf);
    if (!(k.tail_sq <= k.bound_2_over_nf))
      rep.violations.push_back("tail " + config_detail::fmt(k.tail_sq) + " exceeds 2/N_F at N_F = " + std::to_string(nf));
    rep.rows.push_back(k);
  }
  return rep;
}

}  // namespace vps
