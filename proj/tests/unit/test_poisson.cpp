#include "test_support.hpp"

#include "vps/poisson.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

namespace vps {
namespace {

using std::numbers::pi;
const cplx I(0.0, 1.0);

VelocityBasis legendre6(int n) { return VelocityBasis(BasisKind::Legendre, Domain::bounded(-6.0, 6.0), n); }
VelocityBasis hermite(int n) { return VelocityBasis(BasisKind::Hermite, Domain::real_line(), n); }

TEST(GammaTable, LegendreExamples) {
  const GammaTable g(legendre6(4), Resolution{4, 3});
  EXPECT_NEAR(std::abs(g(0, 1) - I * std::sqrt(12.0)), 0.0, 1e-13);
  EXPECT_NEAR(g(0, 1).imag(), 3.4641, 1e-4);
  EXPECT_NEAR(std::abs(g(0, -2) - I * std::sqrt(12.0) / -2.0), 0.0, 1e-13);
  for (int k = -3; k <= 3; ++k) EXPECT_EQ(g(1, k), cplx{});
}

TEST(GammaTable, ZeroColumnAndHermiteOddRows) {
  const GammaTable gl(legendre6(5), Resolution{5, 4});
  const GammaTable gh(hermite(9), Resolution{9, 4});
  for (int n = 0; n < 5; ++n) EXPECT_EQ(gl(n, 0), cplx{});
  for (int n = 0; n < 9; ++n) {
    EXPECT_EQ(gh(n, 0), cplx{});
    if (n % 2 == 1) {
      for (int k = -4; k <= 4; ++k) EXPECT_EQ(gh(n, k), cplx{});
    }
  }
}

TEST(FieldFromState, ZeroStateAndDimensionMismatch) {
  const Resolution res{4, 3};
  const GammaTable g(legendre6(4), res);
  const FieldModes e = field_from_state(SpectralState(res), g);
  for (const auto& m : e.modes) EXPECT_EQ(m, cplx{});
  EXPECT_THROW(field_from_state(SpectralState(Resolution{4, 2}), g), ContractViolation);
}

TEST(FieldFromState, LegendreSingleMode) {
  const Resolution res{4, 3};
  const GammaTable g(legendre6(4), res);
  SpectralState s(res);
  const cplx c(0.3, -0.7);
  s(0, 1) = c;
  const FieldModes e = field_from_state(s, g);
  EXPECT_NEAR(std::abs(e[1] - I * std::sqrt(12.0) * c), 0.0, 1e-14);
  for (int k = -3; k <= 3; ++k)
    if (k != 1) { EXPECT_EQ(e[k], cplx{}); }
}

TEST(FieldFromState, MeanModeAlwaysZero) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 10; ++t) {
    const Resolution res{6, 4};
    const auto s = test::random_state(res, rng);
    EXPECT_EQ(field_from_state(s, GammaTable(legendre6(6), res))[0], cplx{});
    EXPECT_EQ(field_from_state(s, GammaTable(hermite(6), res))[0], cplx{});
  }
}

// rho = 1 - int f dv = -alpha cos x for a perturbed Maxwellian; solve
// dE/dx = rho with zero mean by quadrature and compare with the mode path.
TEST(FieldFromState, CosinePerturbationMatchesQuadratureSolution) {
  const double alpha = 1.0;
  const auto b = hermite(16);
  const Resolution res{16, 4};
  const auto f0 = [&](double x, double v) { return (1.0 + alpha * std::cos(x)) * std::exp(-0.5 * v * v) / std::sqrt(2 * pi); };
  const auto s = project_initial(f0, b, res);
  const FieldModes e = field_from_state(s, GammaTable(b, res));

  const QuadratureRule vq = gauss_hermite_scaled(60);
  auto rho = [&](double x) {
    double n = 0.0;
    for (std::size_t i = 0; i < vq.size(); ++i) n += vq.weights[i] * f0(x, vq.nodes[i]);
    return 1.0 - n;
  };
  auto primitive = [&](double x) {
    const QuadratureRule q = gauss_legendre(40, 0.0, x);
    double s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) s += q.weights[i] * rho(q.nodes[i]);
    return s;
  };
  const QuadratureRule xq = periodic_trapezoid(64);
  double mean = 0.0;
  std::vector<double> prim(xq.size());
  for (std::size_t j = 0; j < xq.size(); ++j) {
    prim[j] = xq.nodes[j] == 0.0 ? 0.0 : primitive(xq.nodes[j]);
    mean += xq.weights[j] * prim[j] / (2 * pi);
  }
  for (std::size_t j = 0; j < xq.size(); ++j) {
    const cplx ex = e.evaluate(xq.nodes[j]);
    EXPECT_NEAR(ex.real(), prim[j] - mean, 1e-10);
    EXPECT_NEAR(ex.real(), -alpha * std::sin(xq.nodes[j]), 1e-10);
    EXPECT_LT(std::abs(ex.imag()), 1e-12);
  }
}

TEST(FieldFromState, RealFieldForHermitianStates) {
  std::mt19937_64 rng(11);
  const Resolution res{5, 6};
  const auto b = legendre6(5);
  const auto s = test::random_state(res, rng);
  const FieldModes e = field_from_state(s, GammaTable(b, res));
  for (double x : {0.0, 0.4, 1.9, 3.3, 5.8}) EXPECT_LT(std::abs(e.evaluate(x).imag()), 1e-12);
}

TEST(FieldFromState, AgreesWithKernelIntegral) {
  std::mt19937_64 rng(5);
  for (const auto& b : {legendre6(4), hermite(4)}) {
    for (int t = 0; t < 5; ++t) {
      const Resolution res{4, 3};
      const auto s = test::random_state(res, rng);
      const FieldModes e = field_from_state(s, GammaTable(b, res));
      const QuadratureRule vq = test::oracle_velocity_rule(b, 30);
      const QuadratureRule xq = periodic_trapezoid(4 * res.n_f + 9);
      for (double x : {0.2, 1.7, 4.4}) {
        cplx acc = 0.0;
        for (std::size_t j = 0; j < xq.size(); ++j) {
          const double kern = kernel_truncated(x, xq.nodes[j], res.n_f);
          for (std::size_t i = 0; i < vq.size(); ++i)
            acc += xq.weights[j] * vq.weights[i] * kern * test::oracle_reconstruct(s, b, xq.nodes[j], vq.nodes[i]);
        }
        EXPECT_NEAR(std::abs(acc - e.evaluate(x)), 0.0, 1e-10);
      }
    }
  }
}

TEST(FieldFromState, L2BoundAgainstDistribution) {
  std::mt19937_64 rng(17);
  const auto b = legendre6(8);
  for (int nf : {1, 3, 8}) {
    const Resolution res{8, nf};
    const double c = (pi / std::sqrt(3.0)) * std::sqrt(12.0) * std::sqrt(1.0 + 1.0 / nf);
    for (int t = 0; t < 20; ++t) {
      const auto s = test::random_state(res, rng);
      const double lhs = std::sqrt(field_from_state(s, GammaTable(b, res)).energy());
      EXPECT_LE(lhs, c * std::sqrt(std::real(inner(s, s))));
    }
  }
}

// --- kernel -------------------------------------------------------------------

TEST(Kernel, RealAntisymmetricAndMatchesModeSum) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 2 * pi);
  for (int t = 0; t < 100; ++t) {
    const double x = u(rng), xp = u(rng);
    const int nf = 1 + t % 40;
    EXPECT_LT(std::abs(kernel_truncated(x, xp, nf) + kernel_truncated(xp, x, nf)), 1e-13);
    const cplx kc = kernel_truncated_complex(x, xp, nf);
    EXPECT_LT(std::abs(kc.imag()), 1e-13);
    EXPECT_NEAR(kc.real(), kernel_truncated(x, xp, nf), 1e-13);
  }
}

TEST(Kernel, NormPartialSumsAndTail) {
  const double limit = pi * pi / 3.0;
  EXPECT_NEAR(limit, 3.289868, 1e-6);
  double prev = 0.0;
  for (int nf : {1, 5, 10, 50, 100, 1000}) {
    const KernelNorms k = kernel_norms(nf);
    EXPECT_GT(k.norm_kn_sq, prev);
    prev = k.norm_kn_sq;
    EXPECT_NEAR(k.norm_kn_sq + k.tail_sq, limit, 1e-12);
    EXPECT_LE(k.tail_sq, 2.0 / nf);
    EXPECT_EQ(k.bound_2_over_nf, 2.0 / nf);
  }
  EXPECT_NEAR(kernel_norms(1000).norm_kn_sq, limit, 2.1e-3);
}

TEST(Kernel, TailAtTenModes) {
  // 2 (pi^2/6 - sum_{k<=10} 1/k^2)
  const KernelNorms k = kernel_norms(10);
  EXPECT_NEAR(k.tail_sq, 0.190333, 1e-6);
  EXPECT_LE(k.tail_sq, 0.2);
}

TEST(Kernel, SupMatchesDenseScan) {
  for (int nf : {5, 10, 50, 100}) {
    const int m = 200000;
    double best = 0.0;
    for (int i = 1; i < m; ++i) best = std::max(best, std::abs(kernel_truncated(2 * pi * i / m, 0.0, nf)));
    const double s = kernel_sup(nf);
    EXPECT_GE(s, best - 1e-14);
    EXPECT_NEAR(s, best, 1e-5);
  }
}

TEST(Kernel, NormsRejectEmptyTruncation) { EXPECT_THROW(kernel_norms(0), ConfigError); }

}  // namespace
}  // namespace vps
