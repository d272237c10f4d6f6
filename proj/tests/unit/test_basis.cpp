#include "test_support.hpp"

#include "vps/basis.hpp"
#include "vps/projection.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

namespace vps {
namespace {

using std::numbers::pi;

VelocityBasis hermite_basis(int n) { return VelocityBasis(BasisKind::Hermite, Domain::real_line(), n); }
VelocityBasis legendre_basis(int n, double lo = -6.0, double hi = 6.0) {
  return VelocityBasis(BasisKind::Legendre, Domain::bounded(lo, hi), n);
}

double orthonormality_residual(const VelocityBasis& b, int nodes) {
  const QuadratureRule q = b.make_quadrature(nodes);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(b.size(), b.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    const auto phi = b.evaluate(q.nodes[i]);
    for (int n = 0; n < b.size(); ++n)
      for (int m = 0; m < b.size(); ++m) g(n, m) += q.weights[i] * phi[n] * phi[m];
  }
  return (g - Eigen::MatrixXd::Identity(b.size(), b.size())).cwiseAbs().maxCoeff();
}

TEST(BasisKindNames, RoundTripAndUnknown) {
  EXPECT_EQ(basis_kind_from_string("hermite"), BasisKind::Hermite);
  EXPECT_EQ(basis_kind_from_string("legendre"), BasisKind::Legendre);
  EXPECT_FALSE(basis_kind_from_string("chebyshev").has_value());
  EXPECT_EQ(to_string(BasisKind::Legendre), "legendre");
}

TEST(VelocityBasis, OrthonormalUpTo64ModesBothKinds) {
  EXPECT_LT(orthonormality_residual(hermite_basis(64), 2 * 64 + 8), 1e-12);
  EXPECT_LT(orthonormality_residual(legendre_basis(64), 2 * 64 + 8), 1e-12);
  EXPECT_LT(orthonormality_residual(legendre_basis(64, -1.0, 1.0), 2 * 64 + 8), 1e-12);
}

TEST(VelocityBasis, HermiteGroundStateAtOrigin) {
  EXPECT_NEAR(hermite_basis(4).evaluate(0.0)[0], std::pow(pi, -0.25), 1e-15);
  EXPECT_NEAR(hermite_basis(4).evaluate(0.0)[0], 0.751126, 1e-6);
}

TEST(VelocityBasis, LegendreConstantModeAndMoments) {
  const auto b = legendre_basis(8);
  for (double v : {-6.0, -1.3, 0.0, 4.2, 6.0}) EXPECT_NEAR(b.evaluate(v)[0], 1.0 / std::sqrt(12.0), 1e-15);
  EXPECT_NEAR(b.moments()[0], std::sqrt(12.0), 1e-13);
  for (int n = 1; n < 8; ++n) EXPECT_EQ(b.moments()[n], 0.0);
}

TEST(VelocityBasis, HermiteMomentsAndParity) {
  const auto b = hermite_basis(20);
  EXPECT_NEAR(b.moments()[0], std::sqrt(2.0) * std::pow(pi, 0.25), 1e-14);
  for (int n = 1; n < 20; n += 2) EXPECT_EQ(b.moments()[n], 0.0);
  // Even moments against brute-force quadrature of the oracle functions.
  const QuadratureRule q = gauss_hermite_scaled(80);
  for (int n = 0; n < 20; n += 2) {
    double m = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) m += q.weights[i] * test::oracle_phi(b, q.nodes[i], n + 1)[n];
    EXPECT_NEAR(b.moments()[n], m, 1e-12) << "n=" << n;
  }
}

TEST(VelocityBasis, FirstAndSecondMomentsMatchQuadrature) {
  for (const auto& b : {hermite_basis(12), legendre_basis(12)}) {
    const QuadratureRule q = test::oracle_velocity_rule(b, 60);
    for (int n = 0; n < 12; ++n) {
      double m1 = 0.0, m2 = 0.0;
      for (std::size_t i = 0; i < q.size(); ++i) {
        const double v = q.nodes[i], p = test::oracle_phi(b, v, n + 1)[n];
        m1 += q.weights[i] * v * p;
        m2 += q.weights[i] * v * v * p;
      }
      EXPECT_NEAR(b.first_moments()[n], m1, 1e-12);
      EXPECT_NEAR(b.second_moments()[n], m2, 1e-11);
    }
  }
}

TEST(VelocityBasis, RecursionStaysFiniteAtHighDegree) {
  const auto b = hermite_basis(400);
  for (double v : {0.0, 3.0, 20.0, 35.0}) {
    const auto phi = b.evaluate(v);
    for (double p : phi) ASSERT_TRUE(std::isfinite(p));
  }
  // |phi_n| <= pi^{-1/4} for Hermite functions (Cramer's inequality).
  for (double p : b.evaluate(1.7)) EXPECT_LE(std::abs(p), std::pow(pi, -0.25) + 1e-12);
}

TEST(VelocityBasis, ValuesAgreeWithExplicitFormulas) {
  for (const auto& b : {hermite_basis(30), legendre_basis(30)}) {
    for (double v : {-5.5, -2.0, 0.3, 1.1, 4.9}) {
      const auto phi = b.evaluate(v);
      const auto dphi = b.evaluate_derivative(v);
      std::vector<double> val, der;
      oracle_detail::values(b, v, 30, val, der);
      for (int n = 0; n < 30; ++n) {
        EXPECT_NEAR(phi[n], val[n], 1e-12 * (1.0 + std::abs(val[n])));
        EXPECT_NEAR(dphi[n], der[n], 1e-11 * (1.0 + std::abs(der[n])));
      }
    }
  }
}

TEST(VelocityMatrix, HermiteExamples) {
  const auto b = hermite_basis(10);
  const auto& v = b.vmul_matrix();
  EXPECT_NEAR(v(0, 1), std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(v(0, 1), 0.707107, 1e-6);
  for (int n = 0; n < 10; ++n) EXPECT_EQ(v(n, n), 0.0);
  for (int n = 0; n + 1 < 10; ++n) EXPECT_NEAR(v(n, n + 1), std::sqrt((n + 1) / 2.0), 1e-14);
}

TEST(VelocityMatrix, LegendreUnitIntervalExample) {
  const auto b = legendre_basis(4, -1.0, 1.0);
  EXPECT_NEAR(b.vmul_matrix()(0, 1), 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(b.vmul_matrix()(0, 1), 0.577350, 1e-6);
}

TEST(VelocityMatrix, SymmetricTridiagonalAndExact) {
  // Closed form on (a, b): V_nn = (a+b)/2, V_{n,n+1} = (L/2)(n+1)/sqrt((2n+1)(2n+3)).
  const double lo = -2.0, hi = 7.0, len = hi - lo;
  const auto b = legendre_basis(40, lo, hi);
  const auto& v = b.vmul_matrix();
  for (int n = 0; n < 40; ++n) {
    for (int m = 0; m < 40; ++m) {
      EXPECT_EQ(v(n, m), v(m, n));
      if (std::abs(n - m) > 1) { EXPECT_EQ(v(n, m), 0.0); }
    }
    EXPECT_NEAR(v(n, n), 0.5 * (lo + hi), 1e-12);
    if (n + 1 < 40) { EXPECT_NEAR(v(n, n + 1), 0.5 * len * (n + 1) / std::sqrt((2.0 * n + 1) * (2.0 * n + 3)), 1e-12); }
  }
}

TEST(DerivativeMatrix, HermiteExamples) {
  const auto b = hermite_basis(10);
  const auto& d = b.deriv_matrix();
  EXPECT_NEAR(d(0, 1), std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(d(1, 0), -std::sqrt(0.5), 1e-15);
  for (int n = 0; n + 1 < 10; ++n) {
    EXPECT_NEAR(d(n, n + 1), std::sqrt((n + 1) / 2.0), 1e-14);
    EXPECT_NEAR(d(n + 1, n), -std::sqrt((n + 1) / 2.0), 1e-14);
  }
  for (int n = 0; n < 10; ++n)
    for (int m = 0; m < 10; ++m)
      if (std::abs(n - m) != 1) { EXPECT_EQ(d(n, m), 0.0); }
}

TEST(DerivativeMatrix, LegendreTwoModesUnitInterval) {
  // phi_0 = 1/sqrt(2), phi_1' = sqrt(3/2): D_01 = 2 * sqrt(3)/2.
  const auto b = legendre_basis(2, -1.0, 1.0);
  EXPECT_NEAR(b.deriv_matrix()(0, 1), std::sqrt(3.0), 1e-14);
  EXPECT_EQ(b.deriv_matrix()(1, 0), 0.0);
}

TEST(DerivativeMatrix, LegendreMatchesBruteForceQuadratureAndClosedForm) {
  const double lo = -6.0, hi = 6.0;
  const int ns = 24;
  const auto b = legendre_basis(ns, lo, hi);
  const QuadratureRule q = gauss_legendre(3 * ns, lo, hi);
  Eigen::MatrixXd brute = Eigen::MatrixXd::Zero(ns, ns);
  for (std::size_t i = 0; i < q.size(); ++i) {
    std::vector<double> val, der;
    oracle_detail::legendre_values(q.nodes[i], lo, hi, ns, val, der);
    for (int n = 0; n < ns; ++n)
      for (int m = 0; m < ns; ++m) brute(n, m) += q.weights[i] * val[n] * der[m];
  }
  EXPECT_LT((b.deriv_matrix() - brute).cwiseAbs().maxCoeff(), 1e-11);
  for (int n = 0; n < ns; ++n)
    for (int m = 0; m < ns; ++m) {
      const double closed = (m > n && (n + m) % 2 == 1) ? (2.0 / (hi - lo)) * std::sqrt((2.0 * n + 1) * (2.0 * m + 1)) : 0.0;
      EXPECT_NEAR(b.deriv_matrix()(n, m), closed, 1e-11) << n << "," << m;
    }
}

TEST(DerivativeMatrix, IntegrationByPartsLegendre) {
  const auto b = legendre_basis(32);
  const Eigen::Map<const Eigen::VectorXd> top(b.boundary_top().data(), 32), bot(b.boundary_bot().data(), 32);
  const Eigen::MatrixXd bnd = top * top.transpose() - bot * bot.transpose();
  const Eigen::MatrixXd& d = b.deriv_matrix();
  EXPECT_LT((d + d.transpose() - bnd).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(DerivativeMatrix, IntegrationByPartsHermiteOnWideInterval) {
  const VelocityBasis b(BasisKind::Hermite, Domain::real_line_with_interval(-30.0, 30.0), 32);
  const Eigen::Map<const Eigen::VectorXd> top(b.boundary_top().data(), 32), bot(b.boundary_bot().data(), 32);
  const Eigen::MatrixXd bnd = top * top.transpose() - bot * bot.transpose();
  const Eigen::MatrixXd& d = b.deriv_matrix();
  EXPECT_LT((d + d.transpose() - bnd).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(BoundaryTables, LegendreEndpointValues) {
  const auto b = legendre_basis(10);
  for (int n = 0; n < 10; ++n) {
    const double s = std::sqrt((2.0 * n + 1.0) / 12.0);
    EXPECT_NEAR(b.boundary_top()[n], s, 1e-13);
    EXPECT_NEAR(b.boundary_bot()[n], (n % 2 ? -s : s), 1e-13);
  }
}

TEST(BoundaryTables, HermiteComputedWhenIntervalGiven) {
  const VelocityBasis b(BasisKind::Hermite, Domain::real_line_with_interval(-2.0, 3.0), 6);
  const auto at_top = b.evaluate(3.0), at_bot = b.evaluate(-2.0);
  for (int n = 0; n < 6; ++n) {
    EXPECT_EQ(b.boundary_top()[n], at_top[n]);
    EXPECT_EQ(b.boundary_bot()[n], at_bot[n]);
  }
  const auto unbounded = hermite_basis(6);
  EXPECT_FALSE(unbounded.has_boundary());
}

TEST(VelocityBasis, ConfigurationErrors) {
  EXPECT_THROW(VelocityBasis(BasisKind::Legendre, Domain::real_line(), 4), ConfigError);
  EXPECT_THROW(VelocityBasis(BasisKind::Legendre, Domain::real_line_with_interval(-1, 1), 4), ConfigError);
  EXPECT_THROW(VelocityBasis(BasisKind::Hermite, Domain::real_line(), 0), ConfigError);
  EXPECT_THROW(VelocityBasis(BasisKind::Legendre, Domain::bounded(2.0, 1.0), 4), ConfigError);
  EXPECT_THROW((Resolution{4, 0}.validate()), ConfigError);
}

TEST(FourierBasis, TrapezoidOrthogonality) {
  const int nf = 12;
  const QuadratureRule q = periodic_trapezoid(4 * nf + 1);
  double worst = 0.0;
  for (int k = -nf; k <= nf; ++k)
    for (int l = -nf; l <= nf; ++l) {
      cplx s = 0.0;
      for (std::size_t j = 0; j < q.size(); ++j)
        s += q.weights[j] * FourierBasis::mode(k, q.nodes[j]) * FourierBasis::mode(-l, q.nodes[j]);
      worst = std::max(worst, std::abs(s - (k == l ? 1.0 : 0.0)));
    }
  EXPECT_LT(worst, 1e-13);
}

// --- projection -------------------------------------------------------------

TEST(Projection, GroundStateGivesSingleMode) {
  const auto b = hermite_basis(6);
  const Resolution res{6, 3};
  const double inv = 1.0 / std::sqrt(2.0 * pi);
  const auto s = project_initial([&](double, double v) { return b.evaluate(v, 1)[0] * inv; }, b, res);
  for (int n = 0; n < 6; ++n)
    for (int k = -3; k <= 3; ++k) EXPECT_NEAR(std::abs(s(n, k) - cplx(n == 0 && k == 0 ? 1.0 : 0.0)), 0.0, 1e-12);
}

TEST(Projection, CosineTimesFirstMode) {
  for (const auto& b : {hermite_basis(5), legendre_basis(5)}) {
    const Resolution res{5, 3};
    const auto s = project_initial([&](double x, double v) { return std::cos(x) * b.evaluate(v, 2)[1]; }, b, res);
    // cos x = sqrt(2 pi)(eta_1 + eta_{-1})/2.
    for (int n = 0; n < 5; ++n)
      for (int k = -3; k <= 3; ++k) {
        const double expect = (n == 1 && std::abs(k) == 1) ? std::sqrt(pi / 2.0) : 0.0;
        EXPECT_NEAR(std::abs(s(n, k) - expect), 0.0, 1e-12) << n << "," << k;
      }
  }
}

TEST(Projection, ZeroFunction) {
  const auto s = project_initial([](double, double) { return 0.0; }, legendre_basis(4), Resolution{4, 2});
  EXPECT_EQ(test::max_abs(s), 0.0);
}

TEST(Projection, NonFiniteSampleIsInputError) {
  const auto f = [](double x, double) { return x > 1.0 ? std::nan("") : 1.0; };
  EXPECT_THROW(project_initial(f, legendre_basis(4), Resolution{4, 2}), InputError);
  const auto g = [](double, double v) { return 1.0 / (v - v); };
  EXPECT_THROW(project_initial(g, hermite_basis(4), Resolution{4, 2}), InputError);
}

TEST(Projection, ReconstructThenProjectRoundTrip) {
  std::mt19937_64 rng(7);
  for (const auto& b : {hermite_basis(8), legendre_basis(8)}) {
    const Resolution res{8, 4};
    const auto g = test::random_state(res, rng);
    const auto back = project_initial([&](double x, double v) { return reconstruct(g, b, x, v); }, b, res);
    EXPECT_LT(test::max_abs_diff(back, g), 1e-12);
  }
}

TEST(Projection, HermitianSymmetryEnforced) {
  const auto s = project_initial([](double x, double v) { return std::exp(std::sin(2 * x) - v * v); }, hermite_basis(6),
                                 Resolution{6, 4});
  EXPECT_EQ(s.hermitian_residual(), 0.0);
}

}  // namespace
}  // namespace vps
