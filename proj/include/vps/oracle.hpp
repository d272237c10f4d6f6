#pragma once

// Dense coefficient tensors A, B, B~ of the truncated ODE system
//
//   dC/dt + A C + (B - B~) C C = 0,
//
// assembled by quadrature of their defining integrals. Verification only: the
// tensors are O(N^3) in the number of modes and the solver never uses them.
//
// Everything here is computed from scratch (basis values, derivatives,
// velocity moments) so that it stays independent of the fast path in
// vlasov_rhs.hpp.

#include "vps/basis.hpp"
#include "vps/errors.hpp"
#include "vps/quadrature.hpp"
#include "vps/state.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace vps {

enum class TestConvention {
  Conjugate,     ///< rows tested against eta_{-k} (solver convention)
  Unconjugated,  ///< rows tested against eta_{k}; a k <-> -k row permutation
};

struct CoefficientTensors {
  Resolution res;
  std::size_t dim = 0;
  std::vector<cplx> a;       ///< A[I*dim + J]
  std::vector<cplx> b;       ///< B[(I*dim + J)*dim + K], J carries E, K carries f
  std::vector<cplx> b_tilde; ///< B~[(I*dim + J)*dim + K], J carries f, K carries E

  std::size_t flat(int n, int k) const { return static_cast<std::size_t>(n) * res.n_k() + k + res.n_f; }

  /// -A C - (B - B~) C C.
  SpectralState rhs(const SpectralState& c) const {
    if (!(c.resolution() == res)) throw ContractViolation("oracle rhs: resolution mismatch");
    const auto x = c.coefficients();
    SpectralState out(res, c.time());
    auto y = out.coefficients();
    for (std::size_t i = 0; i < dim; ++i) {
      cplx s = 0.0;
      for (std::size_t j = 0; j < dim; ++j) s -= a[i * dim + j] * x[j];
      for (std::size_t j = 0; j < dim; ++j) {
        if (x[j] == cplx{}) continue;
        cplx inner_b = 0.0, inner_bt = 0.0;
        for (std::size_t kk = 0; kk < dim; ++kk) {
          inner_b += b[(i * dim + j) * dim + kk] * x[kk];
          inner_bt += b_tilde[(i * dim + j) * dim + kk] * x[kk];
        }
        s -= x[j] * (inner_b - inner_bt);
      }
      y[i] = s;
    }
    return out;
  }
};

namespace oracle_detail {

// Hermite functions from unnormalized physicists' polynomials, normalized by
// sqrt(2^n n! sqrt(pi)) through lgamma. Valid for the small n the oracle uses.
inline void hermite_values(double v, int count, std::vector<double>& val, std::vector<double>& der) {
  std::vector<double> h(count + 1);
  h[0] = 1.0;
  if (count >= 1) h[1] = 2.0 * v;
  for (int n = 1; n < count; ++n) h[n + 1] = 2.0 * v * h[n] - 2.0 * n * h[n - 1];
  val.assign(count, 0.0);
  der.assign(count, 0.0);
  const double g = std::exp(-0.5 * v * v);
  for (int n = 0; n < count; ++n) {
    const double norm = std::exp(0.5 * (n * std::log(2.0) + std::lgamma(n + 1.0) + 0.5 * std::log(std::numbers::pi)));
    val[n] = h[n] * g / norm;
    const double dh = n > 0 ? 2.0 * n * h[n - 1] : 0.0;
    der[n] = (dh - v * h[n]) * g / norm;
  }
}

// Legendre: P_n by recursion, P_n' from (1 - xi^2) P_n' = n (P_{n-1} - xi P_n).
inline void legendre_values(double v, double lo, double hi, int count, std::vector<double>& val,
                            std::vector<double>& der) {
  const double len = hi - lo;
  const double xi = (2.0 * v - lo - hi) / len;
  std::vector<double> p(count + 1);
  p[0] = 1.0;
  if (count >= 1) p[1] = xi;
  for (int n = 1; n < count; ++n) p[n + 1] = ((2.0 * n + 1.0) * xi * p[n] - n * p[n - 1]) / (n + 1.0);
  val.assign(count, 0.0);
  der.assign(count, 0.0);
  for (int n = 0; n < count; ++n) {
    const double s = std::sqrt((2.0 * n + 1.0) / len);
    val[n] = s * p[n];
    const double dp = n > 0 ? n * (p[n - 1] - xi * p[n]) / (1.0 - xi * xi) : 0.0;
    der[n] = s * dp * 2.0 / len;
  }
}

inline void values(const VelocityBasis& basis, double v, int count, std::vector<double>& val,
                   std::vector<double>& der) {
  if (basis.kind() == BasisKind::Hermite) {
    hermite_values(v, count, val, der);
  } else {
    legendre_values(v, basis.domain().v_min, basis.domain().v_max, count, val, der);
  }
}

}  // namespace oracle_detail

inline constexpr std::size_t kOracleMaxModes = 64;

/// Dense A, B, B~ by quadrature. Refuses resolutions with more than 64 modes.
/// With `with_penalty` false, B~ is left at zero.
inline CoefficientTensors assemble_tensors_oracle(const VelocityBasis& basis, Resolution res,
                                                  TestConvention convention = TestConvention::Conjugate,
                                                  bool with_penalty = true) {
  res.validate();
  if (res.size() > kOracleMaxModes)
    throw OracleMisuse("tensor oracle limited to N_S*(2N_F+1) <= 64 modes, got " + std::to_string(res.size()));
  const int ns = res.n_s;
  const int nf = res.n_f;
  const int nk = res.n_k();

  CoefficientTensors t;
  t.res = res;
  t.dim = res.size();
  const std::size_t dim = t.dim;
  t.a.assign(dim * dim, cplx{});
  t.b.assign(dim * dim * dim, cplx{});
  t.b_tilde.assign(dim * dim * dim, cplx{});

  // Velocity integrals.
  const bool hermite = basis.kind() == BasisKind::Hermite;
  const QuadratureRule vq =
      hermite ? gauss_hermite_scaled(2 * ns + 12) : gauss_legendre(2 * ns + 12, basis.domain().v_min, basis.domain().v_max);
  std::vector<double> vmul(ns * ns, 0.0), dmat(ns * ns, 0.0);
  std::vector<double> val, der;
  for (std::size_t q = 0; q < vq.size(); ++q) {
    oracle_detail::values(basis, vq.nodes[q], ns, val, der);
    for (int n = 0; n < ns; ++n)
      for (int m = 0; m < ns; ++m) {
        vmul[n * ns + m] += vq.weights[q] * vq.nodes[q] * val[n] * val[m];
        dmat[n * ns + m] += vq.weights[q] * val[n] * der[m];
      }
  }
  // Moments: the integrand phi_n alone is not polynomial-times-weight for
  // Hermite, so use a fine composite rule over a wide window instead.
  std::vector<double> mom(ns, 0.0);
  {
    std::vector<double> bp;
    if (hermite) {
      bp = {-40.0, 0.0, 40.0};
    } else {
      bp = {basis.domain().v_min, basis.domain().v_max};
    }
    const QuadratureRule mq = composite_gauss_legendre(bp, hermite ? 40 : 1, hermite ? 20 : 2 * ns + 12);
    for (std::size_t q = 0; q < mq.size(); ++q) {
      oracle_detail::values(basis, mq.nodes[q], ns, val, der);
      for (int n = 0; n < ns; ++n) mom[n] += mq.weights[q] * val[n];
    }
  }
  std::vector<double> top(ns, 0.0), bot(ns, 0.0);
  if (with_penalty && basis.has_boundary()) {
    oracle_detail::values(basis, basis.domain().v_max, ns, top, der);
    oracle_detail::values(basis, basis.domain().v_min, ns, bot, der);
  }

  // Fourier integrals by trapezoid, exact for products of three modes.
  const QuadratureRule xq = periodic_trapezoid(6 * nf + 7);
  auto eta = [](int k, double x) { return FourierBasis::mode(k, x); };
  // Test mode: conj(eta_k) = eta_{-k} for the solver; eta_k for the unconjugated convention.
  auto test = [&](int k, double x) { return convention == TestConvention::Conjugate ? eta(-k, x) : eta(k, x); };
  auto gamma = [&](int n, int k) { return k == 0 ? cplx{} : cplx(0.0, mom[n] / k); };

  // x-integrals: two-mode <test_k, d/dx eta_k'> and three-mode <test_k, eta_a eta_b>.
  std::vector<cplx> x2(nk * nk, cplx{});
  std::vector<cplx> x3(static_cast<std::size_t>(nk) * nk * nk, cplx{});
  for (std::size_t j = 0; j < xq.size(); ++j) {
    const double x = xq.nodes[j];
    const double w = xq.weights[j];
    for (int k = -nf; k <= nf; ++k) {
      const cplx tk = test(k, x);
      for (int a = -nf; a <= nf; ++a) {
        x2[(k + nf) * nk + a + nf] += w * tk * cplx(0.0, a) * eta(a, x);
        const cplx ta = tk * eta(a, x);
        for (int b = -nf; b <= nf; ++b) x3[((k + nf) * nk + a + nf) * nk + b + nf] += w * ta * eta(b, x);
      }
    }
  }

  for (int n = 0; n < ns; ++n)
    for (int k = -nf; k <= nf; ++k) {
      const std::size_t i = t.flat(n, k);
      for (int n1 = 0; n1 < ns; ++n1)
        for (int k1 = -nf; k1 <= nf; ++k1) {
          const std::size_t j = t.flat(n1, k1);
          // A = int phi_n test_k v d/dx(phi_n1 eta_k1)
          t.a[i * dim + j] = vmul[n * ns + n1] * x2[(k + nf) * nk + k1 + nf];
          for (int n2 = 0; n2 < ns; ++n2)
            for (int k2 = -nf; k2 <= nf; ++k2) {
              const std::size_t kk = t.flat(n2, k2);
              const cplx xint = x3[((k + nf) * nk + k1 + nf) * nk + k2 + nf];
              // B = -int phi_n test_k Ehat_{n1,k1} d/dv(phi_n2 eta_k2)
              t.b[(i * dim + j) * dim + kk] = -gamma(n1, k1) * dmat[n * ns + n2] * xint;
              // B~ = -(1/2)[phi_n phi_n1]_{v_min}^{v_max} int test_k eta_k1 Ehat_{n2,k2}
              t.b_tilde[(i * dim + j) * dim + kk] =
                  -0.5 * (top[n] * top[n1] - bot[n] * bot[n1]) * gamma(n2, k2) * xint;
            }
        }
    }
  return t;
}

}  // namespace vps
