#pragma once

// JSON and CSV serialization of study reports. Requires nlohmann/json
// (`json.hpp`) on the include path.

#include "vps/harness.hpp"

#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace vps {

using json = nlohmann::json;

/// Thrown when an output file cannot be written.
class OutputError : public std::runtime_error {
 public:
  explicit OutputError(const std::string& what) : std::runtime_error(what) {}
};

inline json to_json(const RunConfig& c) {
  json ic = {{"name", c.initial_condition.name}, {"params", c.initial_condition.params}};
  json j = {{"basis", to_string(c.basis_kind)},
            {"v_unbounded", c.v_unbounded},
            {"n_s", c.n_s},
            {"n_f", c.n_f},
            {"dt", c.dt},
            {"t_end", c.t_end},
            {"stride", c.stride},
            {"penalty", c.penalty_enabled},
            {"ic", ic},
            {"output_dir", c.output_dir},
            {"seed", c.seed}};
  j["v_min"] = std::isfinite(c.v_min) ? json(c.v_min) : json(nullptr);
  j["v_max"] = std::isfinite(c.v_max) ? json(c.v_max) : json(nullptr);
  return j;
}

inline json to_json(const DiagnosticsRecord& r) {
  return {{"t", r.t},
          {"l2_sq", r.l2_sq},
          {"mass", r.mass},
          {"momentum", r.momentum},
          {"kinetic_energy", r.kinetic_energy},
          {"field_energy", r.field_energy},
          {"boundary_flux", r.boundary_flux},
          {"hermitian_residual", r.hermitian_residual}};
}

inline json to_json(const RunReport& r) {
  json j = {{"command", "run"},
            {"config", to_json(r.config)},
            {"n_steps", r.n_steps},
            {"records", r.result.records.size()},
            {"drift", {{"l2_relative_max", r.result.l2_drift_max},
                       {"discretization_relative_max", r.result.discretization_drift_max}}},
            {"cfl", {{"limit", r.cfl_limit}, {"dt", r.config.dt}, {"exceeded", r.cfl_exceeded}}},
            {"wall_time_s", r.wall_time_s},
            {"violations", r.violations},
            {"status", r.violations.empty() ? "ok" : "violation"}};
  j["final"] = r.result.records.empty() ? json(nullptr) : to_json(r.result.records.back());
  return j;
}

inline json to_json(const ConvergenceReport& r) {
  json samples = json::array();
  for (const auto& s : r.samples)
    samples.push_back({{"n_s", s.n_s}, {"n_f", s.n_f}, {"err_l2", s.err_l2}, {"err_field", s.err_field},
                       {"runtime_s", s.runtime_s}});
  return {{"command", "converge"},
          {"config", to_json(r.config)},
          {"sweep", r.options.sweep},
          {"ref_mult", r.options.ref_mult},
          {"reference", {{"n_s", r.reference.n_s}, {"n_f", r.reference.n_f}, {"dt", r.reference_dt},
                         {"runtime_s", r.reference_runtime_s}}},
          {"samples", samples},
          {"strictly_decreasing", r.strictly_decreasing},
          {"fitted_slope", r.fitted_slope},
          {"violations", r.violations},
          {"status", r.violations.empty() ? "ok" : "violation"}};
}

inline json to_json(const ProjectionSeries& s) {
  return {{"name", s.name},         {"n", s.n},
          {"err_l2", s.err_l2},     {"err_h1", s.err_h1},
          {"err_h2", s.err_h2},     {"pair_slopes", s.pair_slopes},
          {"fitted_slope", s.fitted_slope}, {"expected_slope", s.expected_slope}};
}

inline json to_json(const ProjectionReport& r) {
  json dom = {{"v_unbounded", r.domain.v_unbounded}};
  dom["v_min"] = std::isfinite(r.domain.v_min) ? json(r.domain.v_min) : json(nullptr);
  dom["v_max"] = std::isfinite(r.domain.v_max) ? json(r.domain.v_max) : json(nullptr);
  return {{"command", "project-check"},
          {"basis", to_string(r.kind)},
          {"domain", dom},
          {"analytic", to_json(r.analytic)},
          {"kink", to_json(r.kink)},
          {"analytic_steepens", r.analytic_steepens},
          {"kink_rate_ok", r.kink_rate_ok},
          {"violations", r.violations},
          {"status", r.violations.empty() ? "ok" : "violation"}};
}

inline json to_json(const InverseInequalityReport& r) {
  json rows = json::array();
  for (const auto& row : r.table.rows)
    rows.push_back({{"n", row.n}, {"max_ratio", row.max_ratio}, {"sampled_ratio", row.sampled_ratio}});
  return {{"command", "invineq-check"},
          {"basis", to_string(r.table.kind)},
          {"rows", rows},
          {"fitted_exponent", r.table.fitted_exponent},
          {"exponent_ok", r.exponent_ok},
          {"fourier", {{"k", r.fourier_k}, {"ratio", r.fourier_ratio}, {"exact", r.fourier_exact}}},
          {"violations", r.violations},
          {"status", r.violations.empty() ? "ok" : "violation"}};
}

inline json to_json(const KernelNorms& k) {
  return {{"nf", k.n_f},
          {"norm_kn_sq", k.norm_kn_sq},
          {"tail_sq", k.tail_sq},
          {"bound_2_over_nf", k.bound_2_over_nf},
          {"sup_abs_kn", k.sup_abs_kn}};
}

/// Machine-readable error record for failures that stop a command.
inline json error_record(const std::string& command, const std::string& kind, const std::vector<std::string>& messages) {
  return {{"command", command}, {"status", "error"}, {"error", kind}, {"messages", messages}};
}

// ---------------------------------------------------------------------------
// Files.

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path);
  if (!out) throw OutputError("cannot open " + path.string() + " for writing");
  return out;
}

inline void finish_output(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw OutputError("failed writing " + path.string());
}

inline void write_json(const std::filesystem::path& path, const json& j) {
  auto out = open_output(path);
  out << j.dump(2) << '\n';
  finish_output(out, path);
}

inline void write_diagnostics_csv(const std::filesystem::path& path, const std::vector<DiagnosticsRecord>& records) {
  auto out = open_output(path);
  out << kDiagnosticsCsvHeader << '\n';
  for (const auto& r : records) write_csv_row(out, r);
  finish_output(out, path);
}

inline void write_convergence_csv(const std::filesystem::path& path, const std::vector<ConvergenceSample>& samples) {
  auto out = open_output(path);
  out << kConvergenceCsvHeader << '\n';
  for (const auto& s : samples) write_csv_row(out, s);
  finish_output(out, path);
}

inline constexpr const char* kKernelCsvHeader = "nf,norm_kn_sq,tail_sq,bound_2_over_nf,sup_abs_kn";

inline void write_kernel_csv(const std::filesystem::path& path, const std::vector<KernelNorms>& rows) {
  auto out = open_output(path);
  out << kKernelCsvHeader << '\n';
  out.precision(17);
  for (const auto& k : rows)
    out << k.n_f << ',' << k.norm_kn_sq << ',' << k.tail_sq << ',' << k.bound_2_over_nf << ',' << k.sup_abs_kn << '\n';
  finish_output(out, path);
}

inline constexpr const char* kProjectionCsvHeader = "series,n,err_l2,err_h1,err_h2";

inline void write_projection_csv(const std::filesystem::path& path, const ProjectionReport& r) {
  auto out = open_output(path);
  out << kProjectionCsvHeader << '\n';
  out.precision(17);
  for (const ProjectionSeries* s : {&r.analytic, &r.kink})
    for (std::size_t i = 0; i < s->n.size(); ++i)
      out << s->name << ',' << s->n[i] << ',' << s->err_l2[i] << ',' << s->err_h1[i] << ',' << s->err_h2[i] << '\n';
  finish_output(out, path);
}

inline constexpr const char* kInverseInequalityCsvHeader = "n,max_ratio,sampled_ratio";

inline void write_invineq_csv(const std::filesystem::path& path, const InverseInequalityTable& t) {
  auto out = open_output(path);
  out << kInverseInequalityCsvHeader << '\n';
  out.precision(17);
  for (const auto& row : t.rows) out << row.n << ',' << row.max_ratio << ',' << row.sampled_ratio << '\n';
  finish_output(out, path);
}

}  // namespace vps
