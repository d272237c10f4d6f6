#pragma once

// Conserved quantities, moments, projection errors, inverse-inequality ratios
// and inter-solution error norms.

#include "vps/basis.hpp"
#include "vps/poisson.hpp"
#include "vps/projection.hpp"
#include "vps/state.hpp"
#include "vps/vlasov_rhs.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace vps {

struct DiagnosticsRecord {
  double t = 0.0;
  double l2_sq = 0.0;           ///< sum |C|^2 = ||f^N||^2
  double mass = 0.0;            ///< int int f
  double momentum = 0.0;        ///< int int v f
  double kinetic_energy = 0.0;  ///< 1/2 int int v^2 f
  double field_energy = 0.0;    ///< sum |E_k|^2
  double boundary_flux = 0.0;   ///< 1/2 int E (f_top^2 - f_bot^2) dx
  double hermitian_residual = 0.0;
};

inline constexpr const char* kDiagnosticsCsvHeader =
    "t,l2_sq,mass,momentum,kinetic_energy,field_energy,boundary_flux,hermitian_residual";

inline void write_csv_row(std::ostream& os, const DiagnosticsRecord& r) {
  const auto old = os.precision(17);
  os << r.t << ',' << r.l2_sq << ',' << r.mass << ',' << r.momentum << ',' << r.kinetic_energy << ','
     << r.field_energy << ',' << r.boundary_flux << ',' << r.hermitian_residual << '\n';
  os.precision(old);
}

/// sum_{n,k} |C_{n,k}|^2.
inline double l2_norm_sq(const SpectralState& state) {
  double s = 0.0;
  for (const auto& c : state.coefficients()) s += std::norm(c);
  return s;
}

/// (1/2) int E (f(x,v_max)^2 - f(x,v_min)^2) dx by trapezoid quadrature,
/// exact for the degree-3N_F trigonometric integrand.
inline double boundary_flux(const SpectralState& state, const VelocityBasis& basis, const FieldModes& e) {
  if (!basis.has_boundary()) return 0.0;
  const auto ftop = contract_velocity(state, basis.boundary_top());
  const auto fbot = contract_velocity(state, basis.boundary_bot());
  const QuadratureRule xq = periodic_trapezoid(4 * state.n_f() + 9);
  double s = 0.0;
  for (std::size_t j = 0; j < xq.size(); ++j) {
    const double x = xq.nodes[j];
    const double ex = e.evaluate(x).real();
    const double t = eval_fourier(ftop, state.n_f(), x).real();
    const double b = eval_fourier(fbot, state.n_f(), x).real();
    s += xq.weights[j] * ex * (t * t - b * b);
  }
  return 0.5 * s;
}

inline DiagnosticsRecord compute_diagnostics(const SpectralState& state, const VlasovRhs& rhs) {
  const VelocityBasis& basis = rhs.basis();
  DiagnosticsRecord r;
  r.t = state.time();
  r.l2_sq = l2_norm_sq(state);
  // int eta_0 dx = sqrt(2 pi); only the k = 0 column carries velocity moments.
  const double sx = std::sqrt(2.0 * std::numbers::pi);
  for (int n = 0; n < state.n_s(); ++n) {
    const double c0 = state(n, 0).real();
    r.mass += sx * basis.moments()[n] * c0;
    r.momentum += sx * basis.first_moments()[n] * c0;
    r.kinetic_energy += 0.5 * sx * basis.second_moments()[n] * c0;
  }
  const FieldModes e = rhs.field(state);
  r.field_energy = e.energy();
  r.boundary_flux = boundary_flux(state, basis, e);
  r.hermitian_residual = state.hermitian_residual();
  return r;
}

/// ||E^N(a) - E^N(b)||_{L2(0,2pi)}. States may differ in resolution; both
/// fields are formed with gamma tables from `basis`, which must have at least
/// max(n_s) modes.
inline double field_error(const SpectralState& a, const SpectralState& b, const VelocityBasis& basis) {
  const int ns_max = std::max(a.n_s(), b.n_s());
  if (basis.size() < ns_max) throw ContractViolation("field_error: basis smaller than the states");
  const FieldModes ea = field_from_state(a, GammaTable(basis, a.resolution()));
  const FieldModes eb = field_from_state(b, GammaTable(basis, b.resolution()));
  const int nf = std::max(a.n_f(), b.n_f());
  double s = 0.0;
  for (int k = -nf; k <= nf; ++k) {
    const cplx va = std::abs(k) <= ea.n_f ? ea[k] : cplx{};
    const cplx vb = std::abs(k) <= eb.n_f ? eb[k] : cplx{};
    s += std::norm(va - vb);
  }
  return std::sqrt(s);
}

/// ||f^N(a) - f^N(b)||_{L2}, padding the coarser state with zeros.
inline double state_l2_error(const SpectralState& a, const SpectralState& b) {
  const Resolution r{std::max(a.n_s(), b.n_s()), std::max(a.n_f(), b.n_f())};
  return std::sqrt(l2_norm_sq(a.resized(r) - b.resized(r)));
}

struct ConvergenceSample {
  int n_s = 0;
  int n_f = 0;
  double err_l2 = 0.0;
  double err_field = 0.0;
  double runtime_s = 0.0;
};

inline constexpr const char* kConvergenceCsvHeader = "n_s,n_f,err_l2,err_field,runtime_s";

inline void write_csv_row(std::ostream& os, const ConvergenceSample& s) {
  const auto old = os.precision(17);
  os << s.n_s << ',' << s.n_f << ',' << s.err_l2 << ',' << s.err_field << ',' << s.runtime_s << '\n';
  os.precision(old);
}

/// Least-squares slope of log(y) against log(x).
inline double fit_log_log_slope(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

// ---------------------------------------------------------------------------
// Exact derivative operators in coefficient space.

/// Matrix mapping the coefficients of g in span{phi_0..phi_{n-1}} to those of
/// dg/dv. Hermite derivatives leave the span, so the result has n+1 rows;
/// Legendre stays at n rows.
inline Eigen::MatrixXd velocity_derivative_operator(BasisKind kind, const Domain& domain, int n) {
  const int rows = kind == BasisKind::Hermite ? n + 1 : n;
  const VelocityBasis big(kind, domain, rows);
  return big.deriv_matrix().topLeftCorner(rows, n);
}

struct ProjectionErrors {
  SpectralState projected;  ///< P^N f at the low resolution
  double l2 = 0.0;
  double h1 = 0.0;
  double h2 = 0.0;
};

struct ProjectionOptions {
  /// Breakpoints for a composite velocity rule (kinks of f). Empty: the basis
  /// Gauss rule with 2 N_hi + 8 nodes.
  std::vector<double> v_breakpoints;
  int panels_per_piece = 1;
  int nodes_per_panel = 0;  ///< 0: N_S,hi + 64, enough for the degree-N_hi basis on each piece
  int x_points = 0;  ///< 0: 4 N_F,hi + 9
};

/// P^N f at the `hi` resolution, using the velocity rule described by `opt`.
inline SpectralState project_reference(const PhaseSpaceFunction& f, BasisKind kind, const Domain& domain,
                                       Resolution hi, const ProjectionOptions& opt = {}) {
  const VelocityBasis basis(kind, domain, hi.n_s);
  QuadratureRule vq;
  if (opt.v_breakpoints.empty()) {
    vq = basis.make_quadrature(2 * hi.n_s + 8);
  } else {
    const int per_panel = opt.nodes_per_panel > 0 ? opt.nodes_per_panel : hi.n_s + 64;
    vq = composite_gauss_legendre(opt.v_breakpoints, opt.panels_per_piece, per_panel);
  }
  const int nx = opt.x_points > 0 ? opt.x_points : 4 * hi.n_f + 9;
  return project_with_rules(f, basis, hi, vq, nx);
}

/// Truncation of `full` to `lo`, and the L2, H1, H2 norms of the discarded
/// tail. Derivatives act exactly in coefficient space: ik in x and the
/// velocity derivative operator in v.
inline ProjectionErrors truncation_errors(const SpectralState& full, BasisKind kind, const Domain& domain,
                                          Resolution lo) {
  const Resolution hi = full.resolution();
  if (lo.n_s > hi.n_s || lo.n_f > hi.n_f) throw ContractViolation("truncation_errors: hi must contain lo");
  ProjectionErrors out;
  out.projected = full.resized(lo);
  const SpectralState err = full - out.projected.resized(hi);

  const Eigen::MatrixXd dv = velocity_derivative_operator(kind, domain, hi.n_s);
  const int rows1 = static_cast<int>(dv.rows());
  const Eigen::MatrixXcd d1op = dv.cast<cplx>();
  const Eigen::MatrixXcd d2op = (velocity_derivative_operator(kind, domain, rows1) * dv).cast<cplx>();

  double l2 = 0.0, gx = 0.0, gv = 0.0, gxx = 0.0, gxv = 0.0, gvv = 0.0;
  Eigen::VectorXcd col(hi.n_s);
  for (int k = -hi.n_f; k <= hi.n_f; ++k) {
    for (int n = 0; n < hi.n_s; ++n) col(n) = err(n, k);
    const double c2 = col.squaredNorm();
    const double v1 = (d1op * col).squaredNorm();
    const double v2 = (d2op * col).squaredNorm();
    const double kk = static_cast<double>(k) * k;
    l2 += c2;
    gx += kk * c2;
    gv += v1;
    gxx += kk * kk * c2;
    gxv += kk * v1;
    gvv += v2;
  }
  out.l2 = std::sqrt(l2);
  out.h1 = std::sqrt(l2 + gx + gv);
  out.h2 = std::sqrt(l2 + gx + gv + gxx + gxv + gvv);
  return out;
}

/// P^N f at `lo` together with ||f - P^N f|| in L2, H1, H2, measured on the
/// `hi` representation (the tail between hi and lo).
inline ProjectionErrors project_exact(const PhaseSpaceFunction& f, BasisKind kind, const Domain& domain, Resolution hi,
                                      Resolution lo, const ProjectionOptions& opt = {}) {
  if (lo.n_s > hi.n_s || lo.n_f > hi.n_f) throw ContractViolation("project_exact: hi must contain lo");
  return truncation_errors(project_reference(f, kind, domain, hi, opt), kind, domain, lo);
}

/// Projection errors for each resolution in `lows`, sharing one reference
/// projection at `hi`.
inline std::vector<ProjectionErrors> projection_error_sweep(const PhaseSpaceFunction& f, BasisKind kind,
                                                            const Domain& domain, Resolution hi,
                                                            std::span<const Resolution> lows,
                                                            const ProjectionOptions& opt = {}) {
  const SpectralState full = project_reference(f, kind, domain, hi, opt);
  std::vector<ProjectionErrors> out;
  for (const Resolution& lo : lows) out.push_back(truncation_errors(full, kind, domain, lo));
  return out;
}

// ---------------------------------------------------------------------------
// Inverse inequalities.

struct InverseInequalityRow {
  int n = 0;
  double max_ratio = 0.0;      ///< sup over the discrete space of ||dphi/dv|| / ||phi||
  double sampled_ratio = 0.0;  ///< max over random members
};

struct InverseInequalityTable {
  BasisKind kind = BasisKind::Hermite;
  std::vector<InverseInequalityRow> rows;
  double fitted_exponent = 0.0;  ///< slope of log(max_ratio) vs log(n)
};

/// ||d/dv phi|| / ||phi|| over S^N for each N in `n_grid`. The supremum is the
/// largest singular value of the coefficient-space derivative operator.
inline InverseInequalityTable inverse_inequality_ratios(BasisKind kind, const Domain& domain, std::span<const int> n_grid,
                                                        unsigned seed = 12345, int samples = 200) {
  InverseInequalityTable table;
  table.kind = kind;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> xs, ys;
  for (int n : n_grid) {
    const Eigen::MatrixXd d = velocity_derivative_operator(kind, domain, n);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(d);
    InverseInequalityRow row;
    row.n = n;
    row.max_ratio = svd.singularValues()(0);
    for (int s = 0; s < samples; ++s) {
      Eigen::VectorXd c(n);
      for (int i = 0; i < n; ++i) c(i) = gauss(rng);
      row.sampled_ratio = std::max(row.sampled_ratio, (d * c).norm() / c.norm());
    }
    table.rows.push_back(row);
    xs.push_back(n);
    ys.push_back(row.max_ratio);
  }
  if (xs.size() >= 2) table.fitted_exponent = fit_log_log_slope(xs, ys);
  return table;
}

/// ||d/dx g|| / ||g|| for g = sum_k c_k eta_k (coefficients indexed k + N_F).
inline double fourier_derivative_ratio(std::span<const cplx> c, int n_f) {
  double num = 0.0, den = 0.0;
  for (int k = -n_f; k <= n_f; ++k) {
    num += static_cast<double>(k) * k * std::norm(c[k + n_f]);
    den += std::norm(c[k + n_f]);
  }
  return den == 0.0 ? 0.0 : std::sqrt(num / den);
}

}  // namespace vps
