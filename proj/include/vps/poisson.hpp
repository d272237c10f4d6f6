#pragma once

// Electric field recovery from the spectral state, and the Poisson kernels
// K / K^N used to verify it.

#include "vps/basis.hpp"
#include "vps/errors.hpp"
#include "vps/state.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace vps {

/// Fourier modes E_k, k in [-N_F, N_F], of E^N(x) = sum_k E_k eta_k(x).
struct FieldModes {
  int n_f = 0;
  std::vector<cplx> modes;

  FieldModes() = default;
  explicit FieldModes(int nf) : n_f(nf), modes(2 * nf + 1) {}

  cplx& operator[](int k) { return modes[k + n_f]; }
  const cplx& operator[](int k) const { return modes[k + n_f]; }

  /// ||E||_{L2(0,2pi)}^2 = sum |E_k|^2.
  double energy() const {
    double s = 0.0;
    for (const auto& e : modes) s += std::norm(e);
    return s;
  }

  cplx evaluate(double x) const {
    cplx s = 0.0;
    for (int k = -n_f; k <= n_f; ++k) s += (*this)[k] * FourierBasis::mode(k, x);
    return s;
  }
};

/// gamma_{n,k} = (i/k) m_n for k != 0, gamma_{n,0} = 0.
class GammaTable {
 public:
  GammaTable() = default;
  GammaTable(const VelocityBasis& basis, Resolution res) : res_(res), table_(res.size()) {
    if (basis.size() < res.n_s) throw ContractViolation("gamma_table: basis smaller than resolution");
    const auto& m = basis.moments();
    for (int n = 0; n < res.n_s; ++n)
      for (int k = -res.n_f; k <= res.n_f; ++k)
        if (k != 0) table_[index(n, k)] = cplx(0.0, m[n] / k);
  }

  const Resolution& resolution() const { return res_; }
  cplx operator()(int n, int k) const { return table_[index(n, k)]; }

 private:
  std::size_t index(int n, int k) const { return static_cast<std::size_t>(n) * res_.n_k() + k + res_.n_f; }
  Resolution res_{};
  std::vector<cplx> table_;
};

inline GammaTable gamma_table(const VelocityBasis& basis, Resolution res) { return GammaTable(basis, res); }

/// E_k = sum_n gamma_{n,k} C_{n,k}; E_0 = 0.
inline FieldModes field_from_state(const SpectralState& state, const GammaTable& gamma) {
  if (!(state.resolution() == gamma.resolution()))
    throw ContractViolation("field_from_state: state and gamma table dimensions differ");
  FieldModes e(state.n_f());
  for (int k = -state.n_f(); k <= state.n_f(); ++k) {
    if (k == 0) continue;
    cplx s = 0.0;
    for (int n = 0; n < state.n_s(); ++n) s += gamma(n, k) * state(n, k);
    e[k] = s;
  }
  return e;
}

/// K^N(x, x') = i sum_{0<|k|<=N_F} (1/k) eta_k(x) eta_{-k}(x')
///            = -(1/pi) sum_{k=1}^{N_F} sin(k (x - x')) / k.
inline double kernel_truncated(double x, double xp, int n_f) {
  const double s = x - xp;
  double acc = 0.0;
  for (int k = n_f; k >= 1; --k) acc += std::sin(k * s) / k;
  return -acc / std::numbers::pi;
}

/// Same kernel summed in complex form straight from the mode definition;
/// kept for checking reality and antisymmetry.
inline cplx kernel_truncated_complex(double x, double xp, int n_f) {
  cplx acc = 0.0;
  for (int k = -n_f; k <= n_f; ++k) {
    if (k == 0) continue;
    acc += (1.0 / k) * FourierBasis::mode(k, x) * FourierBasis::mode(-k, xp);
  }
  return cplx(0.0, 1.0) * acc;
}

struct KernelNorms {
  int n_f = 0;
  double norm_kn_sq = 0.0;      ///< ||K^N||^2 = sum_{0<|k|<=N_F} 1/k^2
  double tail_sq = 0.0;         ///< ||K - K^N||^2 = sum_{|k|>N_F} 1/k^2
  double bound_2_over_nf = 0.0; ///< 2 / N_F
  double sup_abs_kn = 0.0;      ///< max |K^N(x, x')|
};

/// sum_{k > n} 1/k^2: direct summation up to a cutoff, then the asymptotic
/// expansion of the trigamma function for the remainder.
inline double one_sided_tail(int n) {
  const long long cutoff = std::max<long long>(n + 1, 64);
  double acc = 0.0;
  for (long long k = cutoff - 1; k > n; --k) acc += 1.0 / (static_cast<double>(k) * static_cast<double>(k));
  // psi'(x) = sum_{k >= x} 1/k^2 ~ 1/x + 1/(2x^2) + 1/(6x^3) - 1/(30x^5) + 1/(42x^7) - 1/(30x^9)
  const double x = static_cast<double>(cutoff), r = 1.0 / x, r2 = r * r;
  const double rem = r + 0.5 * r2 + r * r2 * (1.0 / 6.0 - r2 * (1.0 / 30.0 - r2 * (1.0 / 42.0 - r2 / 30.0)));
  return acc + rem;
}

/// max over s in [0, 2 pi) of |K^N| as a function of s = x - x'.
inline double kernel_sup(int n_f) {
  // K^N is odd in s and 2pi-periodic: search s in (0, pi]. The extremum sits
  // near pi/(N_F+1); scan a grid and refine the best cell by golden section.
  const int grid = std::max(4000, 200 * n_f);
  const double h = std::numbers::pi / grid;
  int best = 1;
  double best_val = 0.0;
  for (int i = 1; i <= grid; ++i) {
    const double val = std::abs(kernel_truncated(i * h, 0.0, n_f));
    if (val > best_val) {
      best_val = val;
      best = i;
    }
  }
  double a = (best - 1) * h, b = std::min(std::numbers::pi, (best + 1) * h);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  auto F = [n_f](double s) { return -std::abs(kernel_truncated(s, 0.0, n_f)); };
  double fc = F(c), fd = F(d);
  for (int it = 0; it < 100 && (b - a) > 1e-15; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = F(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = F(d);
    }
  }
  return std::max(best_val, -std::min(fc, fd));
}

inline KernelNorms kernel_norms(int n_f) {
  if (n_f < 1) throw ConfigError("kernel_norms: n_f must be >= 1");
  KernelNorms out;
  out.n_f = n_f;
  double partial = 0.0;
  for (int k = n_f; k >= 1; --k) partial += 1.0 / (static_cast<double>(k) * k);
  out.norm_kn_sq = 2.0 * partial;
  out.tail_sq = 2.0 * one_sided_tail(n_f);
  out.bound_2_over_nf = 2.0 / n_f;
  out.sup_abs_kn = kernel_sup(n_f);
  return out;
}

}  // namespace vps
