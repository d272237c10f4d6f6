#include "test_support.hpp"

#include "vps/integrator.hpp"

#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>
#include <random>

namespace vps {
namespace {

using std::numbers::pi;

VelocityBasis legendre6(int n) { return VelocityBasis(BasisKind::Legendre, Domain::bounded(-6.0, 6.0), n); }
VelocityBasis hermite(int n) { return VelocityBasis(BasisKind::Hermite, Domain::real_line(), n); }

SpectralState landau_state(const VelocityBasis& b, Resolution res, double alpha) {
  const auto f0 = [alpha](double x, double v) {
    return (1.0 + alpha * std::cos(x)) * std::exp(-0.5 * v * v) / std::sqrt(2 * pi);
  };
  return project_initial(f0, b, res);
}

Eigen::VectorXcd to_vector(const SpectralState& s) {
  Eigen::VectorXcd v(s.coefficients().size());
  for (std::size_t i = 0; i < s.coefficients().size(); ++i) v(i) = s.coefficients()[i];
  return v;
}

TEST(TimeGrid, StepCountAndValidation) {
  const TimeGrid g = TimeGrid::make(1e-3, 10.0);
  EXPECT_EQ(g.n_steps, 10000);
  EXPECT_NEAR(g.n_steps * g.dt, g.t_end, 1e-12);
  EXPECT_EQ(TimeGrid::make(0.1, 0.0).n_steps, 0);
  EXPECT_THROW(TimeGrid::make(0.3, 1.0), ConfigError);
  EXPECT_THROW(TimeGrid::make(0.0, 1.0), ConfigError);
  EXPECT_THROW(TimeGrid::make(-0.1, 1.0), ConfigError);
  EXPECT_THROW(TimeGrid::make(0.1, -1.0), ConfigError);
}

TEST(TimeGrid, StepSizeGuard) {
  const auto b = legendre6(16);
  EXPECT_DOUBLE_EQ(cfl_limit(b, Resolution{16, 16}), 0.5 / (16 * 6.0 + 16));
  const auto h = hermite(32);
  EXPECT_DOUBLE_EQ(cfl_limit(h, Resolution{32, 8}, 1.0), 1.0 / (8 * std::sqrt(65.0) + 32));
}

TEST(StepRk4, ZeroStateStaysZero) {
  const Resolution res{6, 4};
  const VlasovRhs rhs(legendre6(6), res, PenaltyConfig{true});
  const auto out = step_rk4(SpectralState(res), rhs, 0.01);
  EXPECT_EQ(test::max_abs(out), 0.0);
  EXPECT_DOUBLE_EQ(out.time(), 0.01);
}

TEST(StepRk4, LinearProblemMatchesMatrixExponential) {
  const Resolution res{8, 4};
  const VlasovRhs rhs(hermite(8), res, PenaltyConfig{false}, RhsTerms{true, false, false});
  const std::size_t dim = res.size();
  // Dense generator from the action on unit vectors (the streaming term is complex-linear).
  Eigen::MatrixXcd m(dim, dim);
  for (std::size_t j = 0; j < dim; ++j) {
    SpectralState e(res);
    e.coefficients()[j] = 1.0;
    m.col(j) = to_vector(rhs(e));
  }
  std::mt19937_64 rng(31);
  const auto c0 = test::random_state(res, rng);
  const double t_end = 1.0;
  const Eigen::MatrixXcd propagator = (m * t_end).exp();
  const Eigen::VectorXcd exact = propagator * to_vector(c0);
  std::vector<double> errors;
  for (double dt : {0.04, 0.02, 0.01}) {
    const auto c = advance(c0, TimeGrid::make(dt, t_end), rhs);
    errors.push_back((to_vector(c) - exact).norm());
  }
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    const double ratio = errors[i] / errors[i + 1];
    EXPECT_GT(ratio, 14.0) << "dt halving " << i;
    EXPECT_LT(ratio, 18.0) << "dt halving " << i;
  }
}

TEST(StepRk4, NonlinearSelfConvergenceOrder) {
  const Resolution res{8, 4};
  const auto b = hermite(8);
  const VlasovRhs rhs(b, res, PenaltyConfig{false});
  const auto c0 = landau_state(b, res, 0.5);
  const double t_end = 2.0;
  const auto c1 = advance(c0, TimeGrid::make(0.04, t_end), rhs);
  const auto c2 = advance(c0, TimeGrid::make(0.02, t_end), rhs);
  const auto c3 = advance(c0, TimeGrid::make(0.01, t_end), rhs);
  const double order = std::log2(state_l2_error(c1, c2) / state_l2_error(c2, c3));
  EXPECT_GE(order, 3.7);
  EXPECT_LE(order, 4.3);
}

TEST(StepRk4, BlowUpIsReported) {
  const Resolution res{4, 2};
  const VlasovRhs rhs(legendre6(4), res, PenaltyConfig{true});
  SpectralState bad(res);
  bad(0, 0) = std::nan("");
  EXPECT_THROW(step_rk4(bad, rhs, 0.1), BlowUpError);

  std::mt19937_64 rng(3);
  const auto big = test::random_state(res, rng, 1e150);
  try {
    run(big, TimeGrid::make(1e10, 1e11), rhs);
    FAIL() << "expected blow-up";
  } catch (const BlowUpError& e) {
    EXPECT_EQ(e.step(), 1);
    EXPECT_TRUE(e.snapshot().all_finite());
  }
}

TEST(StepRk4, RejectsNonPositiveStep) {
  const Resolution res{4, 2};
  const VlasovRhs rhs(legendre6(4), res, PenaltyConfig{true});
  EXPECT_THROW(step_rk4(SpectralState(res), rhs, 0.0), ContractViolation);
}

TEST(Run, ZeroDurationGivesOneRecord) {
  const Resolution res{6, 3};
  const auto b = legendre6(6);
  const VlasovRhs rhs(b, res, PenaltyConfig{true});
  const auto c0 = landau_state(b, res, 0.1);
  const auto r = run(c0, TimeGrid::make(0.01, 0.0), rhs, 5);
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.records[0].t, 0.0);
  EXPECT_EQ(r.records[0].l2_sq, l2_norm_sq(c0));
  EXPECT_EQ(r.final_state, c0);
}

TEST(Run, RecordsEveryStrideAndFinalStep) {
  const Resolution res{6, 3};
  const auto b = legendre6(6);
  const VlasovRhs rhs(b, res, PenaltyConfig{true});
  std::vector<double> seen;
  const auto r = run(landau_state(b, res, 0.1), TimeGrid::make(0.01, 0.23), rhs, 10,
                     [&](const DiagnosticsRecord& d) { seen.push_back(d.t); });
  ASSERT_EQ(r.records.size(), 4u);  // steps 0, 10, 20, 23
  EXPECT_EQ(seen.size(), 4u);
  EXPECT_NEAR(r.records[1].t, 0.1, 1e-15);
  EXPECT_NEAR(r.records.back().t, 0.23, 1e-15);
  EXPECT_THROW(run(r.final_state, TimeGrid::make(0.01, 0.1), rhs, 0), ConfigError);
}

TEST(Run, RestartIsBitwiseDeterministic) {
  const Resolution res{8, 6};
  const auto b = legendre6(8);
  const VlasovRhs rhs(b, res, PenaltyConfig{true});
  const auto c0 = landau_state(b, res, 0.3);
  const auto full = run(c0, TimeGrid::make(0.01, 1.0), rhs, 7).final_state;
  const auto half = run(c0, TimeGrid::make(0.01, 0.5), rhs).final_state;
  const auto rest = run(half, TimeGrid::make(0.01, 0.5), rhs).final_state;
  EXPECT_TRUE(full == rest);
  EXPECT_TRUE(full == advance(c0, TimeGrid::make(0.01, 1.0), rhs));
}

TEST(Run, HermitianSymmetryAndConservationOverRun) {
  const Resolution res{12, 8};
  const auto b = legendre6(12);
  const VlasovRhs rhs(b, res, PenaltyConfig{true});
  const auto r = run(landau_state(b, res, 0.2), TimeGrid::make(2e-3, 2.0), rhs, 50);
  for (const auto& d : r.records) EXPECT_LT(d.hermitian_residual, 1e-13);
  EXPECT_LT(r.l2_drift_max, 1e-10);
  // The measured drift is covered by the time-discretization envelope plus round-off.
  EXPECT_LE(r.l2_drift_max, r.discretization_drift_max + 1e-13);
}

TEST(Run, FiniteDifferenceRateOfL2IsNearZero) {
  const Resolution res{10, 6};
  const auto b = legendre6(10);
  const VlasovRhs rhs(b, res, PenaltyConfig{true});
  const double dt = 1e-3;
  const auto r = run(landau_state(b, res, 0.2), TimeGrid::make(dt, 0.2), rhs, 1);
  for (std::size_t i = 1; i + 1 < r.records.size(); ++i) {
    const double rate = (r.records[i + 1].l2_sq - r.records[i - 1].l2_sq) / (2 * dt);
    EXPECT_LT(std::abs(rate), 1e-9);
  }
}

TEST(Run, DiscretizationDriftScalesAsFourthPower) {
  const Resolution res{8, 6};
  const auto b = legendre6(8);
  const VlasovRhs rhs(b, res, PenaltyConfig{true});
  const auto c0 = landau_state(b, res, 0.3);
  const double d1 = run(c0, TimeGrid::make(0.005, 2.0), rhs, 1000).discretization_drift_max;
  const double d2 = run(c0, TimeGrid::make(0.0025, 2.0), rhs, 1000).discretization_drift_max;
  EXPECT_NEAR(std::log2(d1 / d2), 4.0, 0.3);
}

}  // namespace
}  // namespace vps
