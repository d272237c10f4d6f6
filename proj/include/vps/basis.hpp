#pragma once

// Orthonormal velocity bases (symmetrically weighted Hermite functions on R,
// normalized Legendre polynomials on [v_min, v_max]) and the Fourier modes in x.

#include "vps/errors.hpp"
#include "vps/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vps {

enum class BasisKind { Hermite, Legendre };

inline std::string_view to_string(BasisKind kind) {
  return kind == BasisKind::Hermite ? "hermite" : "legendre";
}

inline std::optional<BasisKind> basis_kind_from_string(std::string_view name) {
  if (name == "hermite") return BasisKind::Hermite;
  if (name == "legendre") return BasisKind::Legendre;
  return std::nullopt;
}

/// Phase-space domain [0, 2 pi) x Omega_v.
///
/// Omega_v is either the interval (v_min, v_max) or, for Hermite only, the
/// whole real line. An unbounded domain may still carry an interval; it is
/// then used for boundary traces and the penalty term.
struct Domain {
  static constexpr double x_period = 2.0 * std::numbers::pi;

  double v_min = std::numeric_limits<double>::quiet_NaN();
  double v_max = std::numeric_limits<double>::quiet_NaN();
  bool v_unbounded = false;

  static Domain bounded(double lo, double hi) { return Domain{lo, hi, false}; }
  static Domain real_line() {
    Domain d;
    d.v_unbounded = true;
    return d;
  }
  static Domain real_line_with_interval(double lo, double hi) { return Domain{lo, hi, true}; }

  bool has_interval() const { return std::isfinite(v_min) && std::isfinite(v_max); }

  /// |Omega_v| when an interval is configured.
  double v_length() const { return v_max - v_min; }

  /// V = max(|v_min|, |v_max|).
  double v_bound() const { return std::max(std::abs(v_min), std::abs(v_max)); }

  void validate() const {
    if (!v_unbounded && !has_interval())
      throw ConfigError("bounded velocity domain requires finite v_min and v_max");
    if (has_interval() && !(v_min < v_max))
      throw ConfigError("velocity interval requires v_min < v_max (got v_min=" + std::to_string(v_min) +
                        ", v_max=" + std::to_string(v_max) + ")");
    if (std::isfinite(v_min) != std::isfinite(v_max))
      throw ConfigError("velocity interval must set both v_min and v_max");
  }
};

/// Truncation N = (N_S, N_F): velocity modes n in [0, N_S), Fourier modes
/// k in [-N_F, N_F].
struct Resolution {
  int n_s = 1;
  int n_f = 1;

  int n_k() const { return 2 * n_f + 1; }
  std::size_t size() const { return static_cast<std::size_t>(n_s) * n_k(); }

  void validate() const {
    if (n_s < 1) throw ConfigError("n_s must be a positive integer");
    if (n_f < 1) throw ConfigError("n_f must be a positive integer");
  }

  friend bool operator==(const Resolution&, const Resolution&) = default;
};

/// Fourier mode eta_k(x) = e^{ikx} / sqrt(2 pi).
struct FourierBasis {
  int n_f = 1;

  static std::complex<double> mode(int k, double x) {
    return std::polar(1.0 / std::sqrt(2.0 * std::numbers::pi), k * x);
  }

  /// eta_{k'} eta_{k''} = product_factor * eta_{k'+k''}.
  static double product_factor() { return 1.0 / std::sqrt(2.0 * std::numbers::pi); }
};

/// Velocity basis phi_0 .. phi_{N_S-1} with derived operator tables.
///
/// Immutable after construction.
class VelocityBasis {
 public:
  VelocityBasis(BasisKind kind, Domain domain, int n_s) : kind_(kind), domain_(domain), n_s_(n_s) {
    if (n_s < 1) throw ConfigError("velocity basis needs n_s >= 1");
    domain_.validate();
    if (kind == BasisKind::Legendre && (domain_.v_unbounded || !domain_.has_interval()))
      throw ConfigError("legendre basis requires a bounded velocity domain");
    build_quadrature();
    build_vmul();
    build_deriv();
    build_moments();
    build_boundary();
  }

  BasisKind kind() const { return kind_; }
  const Domain& domain() const { return domain_; }
  int size() const { return n_s_; }

  /// phi_n(v) for n = 0 .. count-1 (count may exceed size()).
  std::vector<double> evaluate(double v, int count) const {
    std::vector<double> out(count);
    evaluate_into(v, out);
    return out;
  }
  std::vector<double> evaluate(double v) const { return evaluate(v, n_s_); }

  /// phi'_n(v) for n = 0 .. count-1.
  std::vector<double> evaluate_derivative(double v, int count) const {
    std::vector<double> val(count), der(count);
    evaluate_with_derivative(v, val, der);
    return der;
  }
  std::vector<double> evaluate_derivative(double v) const { return evaluate_derivative(v, n_s_); }

  // Recursion phi_{n+1} = (a_n v + b_n) phi_n - c_n phi_{n-1}.
  double recursion_a(int n) const { return rec_a(n); }
  double recursion_b(int n) const { return rec_b(n); }
  double recursion_c(int n) const { return rec_c(n); }

  /// V_{n,n'} = int v phi_n phi_n' dv (symmetric tridiagonal).
  const Eigen::MatrixXd& vmul_matrix() const { return vmul_; }
  /// D_{n,n'} = int phi_n dphi_n'/dv dv.
  const Eigen::MatrixXd& deriv_matrix() const { return deriv_; }
  /// m_n = int phi_n dv.
  const std::vector<double>& moments() const { return moment0_; }
  /// int v phi_n dv.
  const std::vector<double>& first_moments() const { return moment1_; }
  /// int v^2 phi_n dv.
  const std::vector<double>& second_moments() const { return moment2_; }
  /// phi_n(v_max); zeros when no interval is configured.
  const std::vector<double>& boundary_top() const { return top_; }
  /// phi_n(v_min); zeros when no interval is configured.
  const std::vector<double>& boundary_bot() const { return bot_; }
  bool has_boundary() const { return domain_.has_interval(); }

  /// Gauss rule used for velocity integrals of basis products
  /// (2 N_S + 8 nodes; Gauss-Hermite with scaled weights, or Gauss-Legendre
  /// mapped to the interval).
  const QuadratureRule& quadrature() const { return quad_; }

  /// Gauss rule of the same family with `n` nodes.
  QuadratureRule make_quadrature(int n) const {
    if (kind_ == BasisKind::Hermite) return gauss_hermite_scaled(n);
    return gauss_legendre(n, domain_.v_min, domain_.v_max);
  }

  void evaluate_into(double v, std::span<double> out) const {
    const int count = static_cast<int>(out.size());
    if (count == 0) return;
    out[0] = phi0(v);
    if (count == 1) return;
    out[1] = (rec_a(0) * v + rec_b(0)) * out[0];
    for (int n = 1; n + 1 < count; ++n) out[n + 1] = (rec_a(n) * v + rec_b(n)) * out[n] - rec_c(n) * out[n - 1];
  }

  void evaluate_with_derivative(double v, std::span<double> val, std::span<double> der) const {
    const int count = static_cast<int>(val.size());
    if (count == 0) return;
    val[0] = phi0(v);
    der[0] = kind_ == BasisKind::Hermite ? -v * val[0] : 0.0;
    if (count == 1) return;
    val[1] = (rec_a(0) * v + rec_b(0)) * val[0];
    der[1] = rec_a(0) * val[0] + (rec_a(0) * v + rec_b(0)) * der[0];
    for (int n = 1; n + 1 < count; ++n) {
      const double lin = rec_a(n) * v + rec_b(n);
      val[n + 1] = lin * val[n] - rec_c(n) * val[n - 1];
      der[n + 1] = rec_a(n) * val[n] + lin * der[n] - rec_c(n) * der[n - 1];
    }
  }

 private:
  double phi0(double v) const {
    if (kind_ == BasisKind::Hermite) return std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * v * v);
    return 1.0 / std::sqrt(domain_.v_length());
  }

  double rec_a(int n) const {
    if (kind_ == BasisKind::Hermite) return std::sqrt(2.0 / (n + 1));
    const double len = domain_.v_length();
    return 2.0 * (2 * n + 1) * leg_scale(n + 1) / (len * (n + 1) * leg_scale(n));
  }
  double rec_b(int n) const {
    if (kind_ == BasisKind::Hermite) return 0.0;
    const double len = domain_.v_length();
    return -(2 * n + 1) * (domain_.v_min + domain_.v_max) * leg_scale(n + 1) / (len * (n + 1) * leg_scale(n));
  }
  double rec_c(int n) const {
    if (n == 0) return 0.0;
    if (kind_ == BasisKind::Hermite) return std::sqrt(double(n) / (n + 1));
    return n * leg_scale(n + 1) / ((n + 1) * leg_scale(n - 1));
  }
  // phi_n = leg_scale(n) P_n(xi)
  double leg_scale(int n) const { return std::sqrt((2.0 * n + 1.0) / domain_.v_length()); }

  void build_quadrature() { quad_ = make_quadrature(2 * n_s_ + 8); }

  void build_vmul() {
    vmul_ = Eigen::MatrixXd::Zero(n_s_, n_s_);
    if (kind_ == BasisKind::Hermite) {
      for (int n = 0; n + 1 < n_s_; ++n) {
        vmul_(n, n + 1) = std::sqrt(0.5 * (n + 1));
        vmul_(n + 1, n) = vmul_(n, n + 1);
      }
      return;
    }
    // Gauss-Legendre with 2 N_S + 8 nodes is exact for v phi_n phi_m; entries
    // off the tridiagonal vanish exactly and are not stored.
    const Eigen::MatrixXd phi = sample_values(false);
    Eigen::VectorXd wv(static_cast<Eigen::Index>(quad_.size()));
    for (std::size_t q = 0; q < quad_.size(); ++q) wv(q) = quad_.weights[q] * quad_.nodes[q];
    const Eigen::MatrixXd full = phi.transpose() * wv.asDiagonal() * phi;
    for (int n = 0; n < n_s_; ++n)
      for (int m = std::max(0, n - 1); m <= std::min(n_s_ - 1, n + 1); ++m) vmul_(n, m) = 0.5 * (full(n, m) + full(m, n));
  }

  void build_deriv() {
    deriv_ = Eigen::MatrixXd::Zero(n_s_, n_s_);
    if (kind_ == BasisKind::Hermite) {
      // psi_n' = sqrt(n/2) psi_{n-1} - sqrt((n+1)/2) psi_{n+1}
      for (int n = 0; n + 1 < n_s_; ++n) {
        deriv_(n, n + 1) = std::sqrt(0.5 * (n + 1));
        deriv_(n + 1, n) = -std::sqrt(0.5 * (n + 1));
      }
      return;
    }
    // Exact quadrature of phi_n phi_m'. Since phi_m' has degree m - 1 and the
    // parity of m - 1, only m > n with n + m odd survive; the other entries
    // are zero in exact arithmetic and are not stored.
    const Eigen::MatrixXd phi = sample_values(false);
    const Eigen::MatrixXd dphi = sample_values(true);
    Eigen::VectorXd w(static_cast<Eigen::Index>(quad_.size()));
    for (std::size_t q = 0; q < quad_.size(); ++q) w(q) = quad_.weights[q];
    const Eigen::MatrixXd full = phi.transpose() * w.asDiagonal() * dphi;
    for (int m = 1; m < n_s_; ++m)
      for (int n = m - 1; n >= 0; n -= 2) deriv_(n, m) = full(n, m);
  }

  // Basis values (or derivatives) at the quadrature nodes, one row per node.
  Eigen::MatrixXd sample_values(bool derivative) const {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(quad_.size()), n_s_);
    std::vector<double> val(n_s_), der(n_s_);
    for (std::size_t q = 0; q < quad_.size(); ++q) {
      evaluate_with_derivative(quad_.nodes[q], val, der);
      const auto& src = derivative ? der : val;
      for (int n = 0; n < n_s_; ++n) out(static_cast<Eigen::Index>(q), n) = src[n];
    }
    return out;
  }

  void build_moments() {
    moment0_.assign(n_s_, 0.0);
    moment1_.assign(n_s_, 0.0);
    moment2_.assign(n_s_, 0.0);
    if (kind_ == BasisKind::Hermite) {
      // int psi_n' = 0 gives m_{n+1} = sqrt(n/(n+1)) m_{n-1}; the v-moments
      // follow from v psi_n = sqrt((n+1)/2) psi_{n+1} + sqrt(n/2) psi_{n-1}.
      std::vector<double> m0(n_s_ + 2, 0.0), m1(n_s_ + 1, 0.0);
      m0[0] = std::sqrt(2.0) * std::pow(std::numbers::pi, 0.25);
      for (int n = 1; n + 1 < n_s_ + 2; ++n) m0[n + 1] = std::sqrt(double(n) / (n + 1)) * m0[n - 1];
      auto vmom = [](const std::vector<double>& m, int n) {
        return std::sqrt(0.5 * (n + 1)) * m[n + 1] + (n > 0 ? std::sqrt(0.5 * n) * m[n - 1] : 0.0);
      };
      for (int n = 0; n <= n_s_; ++n) m1[n] = vmom(m0, n);
      for (int n = 0; n < n_s_; ++n) {
        moment0_[n] = m0[n];
        moment1_[n] = m1[n];
        moment2_[n] = vmom(m1, n);
      }
      return;
    }
    std::vector<double> phi(n_s_);
    for (std::size_t q = 0; q < quad_.size(); ++q) {
      evaluate_into(quad_.nodes[q], phi);
      const double v = quad_.nodes[q];
      const double w = quad_.weights[q];
      for (int n = 0; n < n_s_; ++n) {
        moment0_[n] += w * phi[n];
        moment1_[n] += w * v * phi[n];
        moment2_[n] += w * v * v * phi[n];
      }
    }
    // Orthogonality to the constant mode is exact in exact arithmetic.
    for (int n = 1; n < n_s_; ++n) moment0_[n] = 0.0;
  }

  void build_boundary() {
    top_.assign(n_s_, 0.0);
    bot_.assign(n_s_, 0.0);
    if (!domain_.has_interval()) return;
    evaluate_into(domain_.v_max, top_);
    evaluate_into(domain_.v_min, bot_);
  }

  BasisKind kind_;
  Domain domain_;
  int n_s_;
  QuadratureRule quad_;
  Eigen::MatrixXd vmul_;
  Eigen::MatrixXd deriv_;
  std::vector<double> moment0_, moment1_, moment2_;
  std::vector<double> top_, bot_;
};

inline VelocityBasis build_velocity_basis(BasisKind kind, const Domain& domain, int n_s) {
  return VelocityBasis(kind, domain, n_s);
}

}  // namespace vps
