#pragma once

// Right-hand side of the truncated spectral Vlasov-Poisson system
//
//   dC/dt = -streaming(C) + field(C) + penalty(C)
//
// with the Fourier index tested against conjugate modes eta_{-k}, so the
// streaming part is diagonal in k.

#include "vps/basis.hpp"
#include "vps/errors.hpp"
#include "vps/poisson.hpp"
#include "vps/projection.hpp"
#include "vps/state.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace vps {

/// Weak enforcement of f = 0 at v_min / v_max through R^N.
struct PenaltyConfig {
  bool enabled = false;

  /// ON for Legendre and Hermite on an interval, OFF for Hermite on R.
  static PenaltyConfig default_for(BasisKind kind, const Domain& domain) {
    if (kind == BasisKind::Legendre) return {true};
    return {!domain.v_unbounded};
  }
};

/// Which parts of the right-hand side are assembled.
struct RhsTerms {
  bool streaming = true;
  bool field = true;
  bool penalty = true;
};

/// Precomputed coefficient tables and the fast evaluation of each RHS term.
///
/// Immutable after construction; all methods are const and return fresh
/// states.
class VlasovRhs {
 public:
  VlasovRhs(VelocityBasis basis, Resolution res, PenaltyConfig penalty, RhsTerms terms = {})
      : basis_(std::move(basis)), res_(res), penalty_(penalty), terms_(terms) {
    res_.validate();
    if (basis_.size() != res_.n_s)
      throw ContractViolation("VlasovRhs: basis size " + std::to_string(basis_.size()) + " != n_s " +
                              std::to_string(res_.n_s));
    if (penalty_.enabled && !basis_.has_boundary())
      throw ConfigError("penalty enabled but no velocity interval is configured (unbounded Hermite domain)");
    gamma_ = GammaTable(basis_, res_);
    build_sparsity();
  }

  const VelocityBasis& basis() const { return basis_; }
  const Resolution& resolution() const { return res_; }
  const GammaTable& gamma() const { return gamma_; }
  const PenaltyConfig& penalty() const { return penalty_; }
  const RhsTerms& terms() const { return terms_; }

  FieldModes field(const SpectralState& state) const { return field_from_state(state, gamma_); }

  /// -(v df/dx) in spectral form is -i k sum_n' V_{n,n'} C_{n',k}; this returns
  /// that contribution (already carrying the minus sign).
  SpectralState streaming_term(const SpectralState& state) const {
    check(state);
    SpectralState out(res_, state.time());
    const auto& vm = basis_.vmul_matrix();
    for (int n = 0; n < res_.n_s; ++n) {
      const int lo = std::max(0, n - 1), hi = std::min(res_.n_s - 1, n + 1);
      for (int k = -res_.n_f; k <= res_.n_f; ++k) {
        cplx w = 0.0;
        for (int m = lo; m <= hi; ++m) w += vm(n, m) * state(m, k);
        out(n, k) = cplx(k * w.imag(), -k * w.real());
      }
    }
    return out;
  }

  /// +E df/dv: (2 pi)^{-1/2} sum_k' E_k' sum_n' D_{n,n'} C_{n',k-k'}.
  SpectralState field_term(const SpectralState& state, const FieldModes& e) const {
    check(state);
    check(e);
    SpectralState out(res_, state.time());
    std::vector<cplx> dc(res_.n_k());
    for (int n = 0; n < res_.n_s; ++n) {
      deriv_row(state, n, dc);
      convolve_add(e, dc, FourierBasis::product_factor(), out.row(n));
    }
    return out;
  }

  /// Spectral image of R^N:
  /// -(1/2)(2 pi)^{-1/2} sum_k' E_k' [phi_n(v_max) ftop_{k-k'} - phi_n(v_min) fbot_{k-k'}].
  SpectralState penalty_term(const SpectralState& state, const FieldModes& e) const {
    check(state);
    check(e);
    if (!basis_.has_boundary())
      throw ConfigError("penalty term needs a velocity interval (unbounded Hermite domain has none)");
    SpectralState out(res_, state.time());
    const auto ftop = contract_velocity(state, basis_.boundary_top());
    const auto fbot = contract_velocity(state, basis_.boundary_bot());
    std::vector<cplx> g(res_.n_k());
    const auto& top = basis_.boundary_top();
    const auto& bot = basis_.boundary_bot();
    for (int n = 0; n < res_.n_s; ++n) {
      for (int kk = 0; kk < res_.n_k(); ++kk) g[kk] = top[n] * ftop[kk] - bot[n] * fbot[kk];
      convolve_add(e, g, -0.5 * FourierBasis::product_factor(), out.row(n));
    }
    return out;
  }

  /// dC/dt.
  SpectralState operator()(const SpectralState& state) const {
    SpectralState out(res_, state.time());
    evaluate(state, out);
    return out;
  }

  /// dC/dt written into `out` (resized as needed).
  void evaluate(const SpectralState& state, SpectralState& out) const {
    check(state);
    if (!(out.resolution() == res_)) out = SpectralState(res_, state.time());
    out.set_time(state.time());
    if (terms_.streaming) {
      out = streaming_term(state);
    } else {
      std::fill(out.coefficients().begin(), out.coefficients().end(), cplx{});
    }
    const bool with_field = terms_.field;
    const bool with_penalty = terms_.penalty && penalty_.enabled;
    if (!with_field && !with_penalty) return;

    const FieldModes e = field(state);
    std::vector<cplx> ftop, fbot;
    if (with_penalty) {
      ftop = contract_velocity(state, basis_.boundary_top());
      fbot = contract_velocity(state, basis_.boundary_bot());
    }
    const auto& top = basis_.boundary_top();
    const auto& bot = basis_.boundary_bot();
    std::vector<cplx> g(res_.n_k());
    for (int n = 0; n < res_.n_s; ++n) {
      if (with_field) {
        deriv_row(state, n, g);
      } else {
        std::fill(g.begin(), g.end(), cplx{});
      }
      if (with_penalty) {
        for (int kk = 0; kk < res_.n_k(); ++kk) g[kk] -= 0.5 * (top[n] * ftop[kk] - bot[n] * fbot[kk]);
      }
      convolve_add(e, g, FourierBasis::product_factor(), out.row(n));
    }
  }

 private:
  void check(const SpectralState& s) const {
    if (!(s.resolution() == res_)) throw ContractViolation("state resolution does not match the RHS tables");
  }
  void check(const FieldModes& e) const {
    if (e.n_f != res_.n_f) throw ContractViolation("field modes do not match the RHS resolution");
  }

  void build_sparsity() {
    const auto& d = basis_.deriv_matrix();
    deriv_cols_.assign(res_.n_s, {});
    for (int n = 0; n < res_.n_s; ++n)
      for (int m = 0; m < res_.n_s; ++m)
        if (d(n, m) != 0.0) deriv_cols_[n].push_back(m);
  }

  // out[k] = sum_n' D_{n,n'} C_{n',k}
  void deriv_row(const SpectralState& state, int n, std::span<cplx> out) const {
    std::fill(out.begin(), out.end(), cplx{});
    const auto& d = basis_.deriv_matrix();
    for (int m : deriv_cols_[n]) {
      const double dnm = d(n, m);
      const auto row = state.row(m);
      for (std::size_t kk = 0; kk < out.size(); ++kk) out[kk] += dnm * row[kk];
    }
  }

  // out[k] += scale * sum_{k'} E_{k'} g_{k-k'}, dropping |k-k'| > N_F.
  // Terms are paired as (k', -k') so that Hermitian-symmetric inputs give an
  // exactly Hermitian-symmetric result.
  void convolve_add(const FieldModes& e, std::span<const cplx> g, double scale, std::span<cplx> out) const {
    const int nf = res_.n_f;
    for (int k = -nf; k <= nf; ++k) {
      cplx s = e[0] * g[k + nf];
      for (int d = 1; d <= nf; ++d) {
        const int km = k - d;
        const int kp = k + d;
        const cplx plus = (km >= -nf) ? e[d] * g[km + nf] : cplx{};
        const cplx minus = (kp <= nf) ? e[-d] * g[kp + nf] : cplx{};
        s += plus + minus;
      }
      out[k + nf] += scale * s;
    }
  }

  VelocityBasis basis_;
  Resolution res_;
  PenaltyConfig penalty_;
  RhsTerms terms_;
  GammaTable gamma_;
  std::vector<std::vector<int>> deriv_cols_;
};

}  // namespace vps
