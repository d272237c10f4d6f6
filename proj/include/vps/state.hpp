#pragma once

#include "vps/basis.hpp"
#include "vps/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

namespace vps {

using cplx = std::complex<double>;

/// Coefficients C_{n,k} of f^N = sum C_{n,k} phi_n(v) eta_k(x) at time t.
///
/// Storage is row-major in n with the Fourier index shifted by N_F.
class SpectralState {
 public:
  SpectralState() = default;
  explicit SpectralState(Resolution res, double t = 0.0) : res_(res), t_(t), data_(res.size()) {}

  const Resolution& resolution() const { return res_; }
  int n_s() const { return res_.n_s; }
  int n_f() const { return res_.n_f; }

  double time() const { return t_; }
  void set_time(double t) { t_ = t; }

  cplx& operator()(int n, int k) { return data_[index(n, k)]; }
  const cplx& operator()(int n, int k) const { return data_[index(n, k)]; }

  std::span<cplx> coefficients() { return data_; }
  std::span<const cplx> coefficients() const { return data_; }

  /// Row n of the coefficient table, indexed by k + N_F.
  std::span<cplx> row(int n) { return {data_.data() + static_cast<std::size_t>(n) * res_.n_k(), static_cast<std::size_t>(res_.n_k())}; }
  std::span<const cplx> row(int n) const {
    return {data_.data() + static_cast<std::size_t>(n) * res_.n_k(), static_cast<std::size_t>(res_.n_k())};
  }

  std::size_t index(int n, int k) const { return static_cast<std::size_t>(n) * res_.n_k() + (k + res_.n_f); }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](const cplx& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
  }

  /// max |C_{n,-k} - conj(C_{n,k})|.
  double hermitian_residual() const {
    double r = 0.0;
    for (int n = 0; n < res_.n_s; ++n)
      for (int k = 0; k <= res_.n_f; ++k) r = std::max(r, std::abs((*this)(n, -k) - std::conj((*this)(n, k))));
    return r;
  }

  /// Replace C by its Hermitian part (C_{n,k} + conj(C_{n,-k})) / 2.
  void enforce_hermitian() {
    for (int n = 0; n < res_.n_s; ++n) {
      (*this)(n, 0) = cplx((*this)(n, 0).real(), 0.0);
      for (int k = 1; k <= res_.n_f; ++k) {
        const cplx avg = 0.5 * ((*this)(n, k) + std::conj((*this)(n, -k)));
        (*this)(n, k) = avg;
        (*this)(n, -k) = std::conj(avg);
      }
    }
  }

  /// Copy into resolution `target`, truncating or zero-padding modes.
  SpectralState resized(Resolution target) const {
    SpectralState out(target, t_);
    const int ns = std::min(res_.n_s, target.n_s);
    const int nf = std::min(res_.n_f, target.n_f);
    for (int n = 0; n < ns; ++n)
      for (int k = -nf; k <= nf; ++k) out(n, k) = (*this)(n, k);
    return out;
  }

  SpectralState& operator+=(const SpectralState& o) {
    check_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  SpectralState& operator-=(const SpectralState& o) {
    check_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  SpectralState& operator*=(double s) {
    for (auto& c : data_) c *= s;
    return *this;
  }
  friend SpectralState operator+(SpectralState a, const SpectralState& b) { return a += b; }
  friend SpectralState operator-(SpectralState a, const SpectralState& b) { return a -= b; }
  friend SpectralState operator*(double s, SpectralState a) { return a *= s; }

  /// y += s * x
  void axpy(double s, const SpectralState& x) {
    check_same(x);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += s * x.data_[i];
  }

  void check_same(const SpectralState& o) const {
    if (!(res_ == o.res_)) throw ContractViolation("spectral states have different resolutions");
  }

  friend bool operator==(const SpectralState& a, const SpectralState& b) {
    return a.res_ == b.res_ && a.data_ == b.data_;
  }

 private:
  Resolution res_{};
  double t_ = 0.0;
  std::vector<cplx> data_;
};

/// <a, b> = sum conj(a_{n,k}) b_{n,k}.
inline cplx inner(const SpectralState& a, const SpectralState& b) {
  a.check_same(b);
  cplx s = 0.0;
  const auto ca = a.coefficients();
  const auto cb = b.coefficients();
  for (std::size_t i = 0; i < ca.size(); ++i) s += std::conj(ca[i]) * cb[i];
  return s;
}

}  // namespace vps
