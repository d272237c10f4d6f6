#pragma once

// L2 projection of phase-space functions onto X^N and pointwise reconstruction.

#include "vps/basis.hpp"
#include "vps/errors.hpp"
#include "vps/quadrature.hpp"
#include "vps/state.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace vps {

using PhaseSpaceFunction = std::function<double(double x, double v)>;

/// C_{n,k} = int int f phi_n eta_{-k} dv dx by tensor quadrature with the
/// given velocity rule and an `n_x`-point trapezoid rule in x.
inline SpectralState project_with_rules(const PhaseSpaceFunction& f, const VelocityBasis& basis, Resolution res,
                                        const QuadratureRule& v_rule, int n_x) {
  res.validate();
  if (basis.size() < res.n_s) throw ContractViolation("basis has fewer modes than the requested resolution");
  const QuadratureRule x_rule = periodic_trapezoid(n_x);
  const int nk = res.n_k();
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

  // twiddle[j][k + N_F] = w_j e^{-ikx_j} / sqrt(2 pi)
  std::vector<cplx> twiddle(static_cast<std::size_t>(n_x) * nk);
  for (int j = 0; j < n_x; ++j)
    for (int k = -res.n_f; k <= res.n_f; ++k)
      twiddle[static_cast<std::size_t>(j) * nk + k + res.n_f] =
          x_rule.weights[j] * inv_sqrt_2pi * std::polar(1.0, -k * x_rule.nodes[j]);

  SpectralState out(res);
  std::vector<double> phi(res.n_s);
  std::vector<cplx> gk(nk);
  for (std::size_t q = 0; q < v_rule.size(); ++q) {
    const double v = v_rule.nodes[q];
    std::fill(gk.begin(), gk.end(), cplx{});
    for (int j = 0; j < n_x; ++j) {
      const double s = f(x_rule.nodes[j], v);
      if (!std::isfinite(s))
        throw InputError("initial condition is not finite at x=" + std::to_string(x_rule.nodes[j]) +
                         ", v=" + std::to_string(v));
      if (s == 0.0) continue;
      const cplx* tw = &twiddle[static_cast<std::size_t>(j) * nk];
      for (int kk = 0; kk < nk; ++kk) gk[kk] += s * tw[kk];
    }
    basis.evaluate_into(v, phi);
    for (int n = 0; n < res.n_s; ++n) {
      const double wp = v_rule.weights[q] * phi[n];
      if (wp == 0.0) continue;
      auto row = out.row(n);
      for (int kk = 0; kk < nk; ++kk) row[kk] += wp * gk[kk];
    }
  }
  out.enforce_hermitian();
  return out;
}

/// P^N f0 with the default rules: the basis Gauss rule (2 N_S + 8 nodes) in v
/// and a (4 N_F + 9)-point trapezoid in x.
inline SpectralState project_initial(const PhaseSpaceFunction& f0, const VelocityBasis& basis, Resolution res) {
  return project_with_rules(f0, basis, res, basis.quadrature(), 4 * res.n_f + 9);
}

/// f^N(x, v) (real part; the imaginary part vanishes for Hermitian states).
inline double reconstruct(const SpectralState& state, const VelocityBasis& basis, double x, double v) {
  const std::vector<double> phi = basis.evaluate(v, state.n_s());
  cplx s = 0.0;
  for (int k = -state.n_f(); k <= state.n_f(); ++k) {
    cplx col = 0.0;
    for (int n = 0; n < state.n_s(); ++n) col += phi[n] * state(n, k);
    s += col * FourierBasis::mode(k, x);
  }
  return s.real();
}

/// Fourier coefficients of x -> sum_n g_n f_n(x), e.g. the trace f^N(x, v_max)
/// when g = phi(v_max).
inline std::vector<cplx> contract_velocity(const SpectralState& state, std::span<const double> g) {
  std::vector<cplx> out(state.resolution().n_k());
  for (int n = 0; n < state.n_s(); ++n) {
    if (g[n] == 0.0) continue;
    const auto row = state.row(n);
    for (std::size_t kk = 0; kk < out.size(); ++kk) out[kk] += g[n] * row[kk];
  }
  return out;
}

/// Evaluate a Fourier series sum_k a_k eta_k(x).
inline cplx eval_fourier(std::span<const cplx> modes, int n_f, double x) {
  cplx s = 0.0;
  for (int k = -n_f; k <= n_f; ++k) s += modes[k + n_f] * FourierBasis::mode(k, x);
  return s;
}

}  // namespace vps
