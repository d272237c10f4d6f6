#pragma once

// Gauss rules used by the velocity bases and the projection operators.

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace vps {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// Gauss-Legendre rule with `n` nodes mapped to [a, b].
inline QuadratureRule gauss_legendre(int n, double a = -1.0, double b = 1.0) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);

  // P_n(z) and P_{n-1}(z) by the three-term recursion.
  auto eval = [n](double z, double& p_n, double& p_nm1) {
    double prev = 1.0, cur = z;
    if (n == 1) {
      p_n = z;
      p_nm1 = 1.0;
      return;
    }
    for (int j = 1; j < n; ++j) {
      const double next = ((2.0 * j + 1.0) * z * cur - j * prev) / (j + 1.0);
      prev = cur;
      cur = next;
    }
    p_n = cur;
    p_nm1 = prev;
  };

  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double p_n = 0.0, p_nm1 = 0.0, dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      eval(z, p_n, p_nm1);
      dp = n * (z * p_n - p_nm1) / (z * z - 1.0);
      const double dz = p_n / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    eval(z, p_n, p_nm1);
    dp = n * (z * p_n - p_nm1) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = mid - half * z;
    rule.nodes[n - 1 - i] = mid + half * z;
    rule.weights[i] = half * w;
    rule.weights[n - 1 - i] = half * w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = mid;
  return rule;
}

/// Gauss-Hermite rule for unweighted integrals of Hermite-function products.
///
/// Nodes are the roots of H_n. The returned weights already include the
/// factor e^{v^2}, so sum_i w_i g(v_i) integrates g(v) over the real line
/// exactly whenever g is a polynomial of degree <= 2n-1 times e^{-v^2}.
inline QuadratureRule gauss_hermite_scaled(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite_scaled: n must be >= 1");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);

  // Golub-Welsch seed, then Newton polish on the normalized polynomial.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n > 1 ? n - 1 : 0);
  for (int j = 1; j < n; ++j) sub(j - 1) = std::sqrt(0.5 * j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd seeds = solver.eigenvalues();

  const double pim4 = std::pow(std::numbers::pi, -0.25);
  auto eval = [&](double z, double& p_n, double& p_nm1) {
    double p_prev = 0.0, p = pim4;
    for (int j = 0; j < n; ++j) {
      const double next = z * std::sqrt(2.0 / (j + 1)) * p - std::sqrt(double(j) / (j + 1)) * p_prev;
      p_prev = p;
      p = next;
    }
    p_n = p;
    p_nm1 = p_prev;
  };

  for (int i = 0; i < n; ++i) {
    double z = seeds(i);
    double p_n = 0.0, p_nm1 = 0.0;
    for (int it = 0; it < 20; ++it) {
      eval(z, p_n, p_nm1);
      const double dz = p_n / (std::sqrt(2.0 * n) * p_nm1);
      z -= dz;
      if (std::abs(dz) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    eval(z, p_n, p_nm1);
    // psi_{n-1}(z)^2 = p_{n-1}^2 e^{-z^2};  w~ = 1 / (n psi_{n-1}^2)
    const double psi = p_nm1 * std::exp(-0.5 * z * z);
    rule.nodes[i] = z;
    rule.weights[i] = 1.0 / (n * psi * psi);
  }
  // Enforce exact symmetry of the rule.
  for (int i = 0; i < n / 2; ++i) {
    const double z = 0.5 * (rule.nodes[n - 1 - i] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[n - 1 - i] + rule.weights[i]);
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

/// Composite Gauss-Legendre rule over consecutive panels [b_0,b_1], [b_1,b_2],
/// ..., each split into `sub` equal pieces with `order` nodes per piece.
/// Used for integrands with kinks at known breakpoints.
inline QuadratureRule composite_gauss_legendre(std::span<const double> breakpoints, int sub, int order) {
  QuadratureRule out;
  const QuadratureRule ref = gauss_legendre(order);
  for (std::size_t p = 0; p + 1 < breakpoints.size(); ++p) {
    const double a = breakpoints[p];
    const double h = (breakpoints[p + 1] - a) / sub;
    for (int s = 0; s < sub; ++s) {
      const double lo = a + s * h;
      for (std::size_t i = 0; i < ref.size(); ++i) {
        out.nodes.push_back(lo + 0.5 * h * (ref.nodes[i] + 1.0));
        out.weights.push_back(0.5 * h * ref.weights[i]);
      }
    }
  }
  return out;
}

/// Uniform trapezoid rule on [0, 2 pi) with `n` nodes; exact for
/// trigonometric polynomials of degree < n.
inline QuadratureRule periodic_trapezoid(int n) {
  if (n < 1) throw std::invalid_argument("periodic_trapezoid: n must be >= 1");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.assign(n, 2.0 * std::numbers::pi / n);
  for (int j = 0; j < n; ++j) rule.nodes[j] = 2.0 * std::numbers::pi * j / n;
  return rule;
}

}  // namespace vps
