// Command-line front end: run | converge | kernel-check | project-check | invineq-check.
//
// Exit status: 0 success, 1 invariant violation, 2 configuration or usage
// error, 3 output failure, 4 any other runtime failure. Errors are printed to
// stderr as JSON records.

#include "vps/report.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kViolation = 1, kConfig = 2, kOutput = 3, kRuntime = 4 };

int emit_error(const std::string& command, const std::string& kind, const std::vector<std::string>& messages, int code) {
  std::cerr << vps::error_record(command, kind, messages).dump() << '\n';
  return code;
}

/// Runs `body`, translating exceptions into JSON error records and exit codes.
template <class F>
int guarded(const std::string& command, F&& body) {
  try {
    return body();
  } catch (const vps::ConfigParseError& e) {
    return emit_error(command, "config", e.violations(), kConfig);
  } catch (const vps::ConfigError& e) {
    return emit_error(command, "config", {e.what()}, kConfig);
  } catch (const vps::InputError& e) {
    return emit_error(command, "input", {e.what()}, kConfig);
  } catch (const vps::OutputError& e) {
    return emit_error(command, "output", {e.what()}, kOutput);
  } catch (const vps::BlowUpError& e) {
    return emit_error(command, "blow-up", {e.what()}, kViolation);
  } catch (const std::exception& e) {
    return emit_error(command, "runtime", {e.what()}, kRuntime);
  }
}

int finish(const vps::json& j, const std::vector<std::string>& violations) {
  std::cout << j.dump(2) << '\n';
  return violations.empty() ? kOk : kViolation;
}

fs::path output_dir(const vps::RunConfig& cfg, const std::string& override_dir) {
  return override_dir.empty() ? fs::path(cfg.output_dir) : fs::path(override_dir);
}

void warn_cfl(const vps::RunReport& rep) {
  if (!rep.cfl_exceeded) return;
  std::cerr << vps::json{{"warning", "cfl"},
                         {"dt", rep.config.dt},
                         {"limit", rep.cfl_limit},
                         {"message", "dt exceeds the step-size guard; results may be inaccurate"}}
                   .dump()
            << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral Vlasov-Poisson solver (Hermite/Legendre x Fourier)"};
  app.require_subcommand(1);

  std::string config_path, out_override;

  auto* run = app.add_subcommand("run", "integrate one configuration and write diagnostics");
  run->add_option("-c,--config", config_path, "config file")->required();
  run->add_option("-o,--out", out_override, "output directory (overrides output_dir)");

  std::vector<int> sweep{8, 16, 32};
  int ref_mult = 2;
  bool serial = false;
  auto* converge = app.add_subcommand("converge", "self-convergence sweep against a refined reference run");
  converge->add_option("-c,--config", config_path, "config file")->required();
  converge->add_option("--sweep", sweep, "resolutions N, run at (N_S, N_F) = (N, N)")->delimiter(',');
  converge->add_option("--ref-mult", ref_mult, "reference resolution multiplier")->check(CLI::PositiveNumber);
  converge->add_flag("--serial", serial, "run sweep points one after another");
  converge->add_option("-o,--out", out_override, "output directory (overrides output_dir)");

  std::vector<int> nf_values;
  auto* kernel = app.add_subcommand("kernel-check", "norms and sup of the truncated Poisson kernel");
  kernel->add_option("--nf", nf_values, "N_F values")->required()->delimiter(',')->check(CLI::PositiveNumber);
  kernel->add_option("-o,--out", out_override, "write kernel.csv into this directory");

  auto* project = app.add_subcommand("project-check", "projection error rates for the configured basis");
  project->add_option("-c,--config", config_path, "config file")->required();
  project->add_option("-o,--out", out_override, "output directory (overrides output_dir)");

  std::string basis_name = "hermite";
  int max_n = 128;
  unsigned seed = 12345;
  auto* invineq = app.add_subcommand("invineq-check", "inverse-inequality growth of the velocity basis");
  invineq->add_option("--basis", basis_name, "hermite or legendre");
  invineq->add_option("--max-n", max_n, "largest N in the 8, 16, ... grid");
  invineq->add_option("--seed", seed, "seed for the random samples");
  invineq->add_option("-o,--out", out_override, "write invineq.csv/json into this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return emit_error("cli", "usage", {e.what()}, kConfig);
  }

  if (*run) {
    return guarded("run", [&] {
      const vps::RunConfig cfg = vps::parse_config(config_path);
      const fs::path dir = output_dir(cfg, out_override);
      const vps::RunReport rep = vps::run_study(cfg);
      warn_cfl(rep);
      vps::write_diagnostics_csv(dir / "diagnostics.csv", rep.result.records);
      const vps::json j = vps::to_json(rep);
      vps::write_json(dir / "summary.json", j);
      return finish(j, rep.violations);
    });
  }
  if (*converge) {
    return guarded("converge", [&] {
      const vps::RunConfig cfg = vps::parse_config(config_path);
      const fs::path dir = output_dir(cfg, out_override);
      vps::ConvergenceOptions opt;
      opt.sweep = sweep;
      opt.ref_mult = ref_mult;
      opt.parallel = !serial;
      const vps::ConvergenceReport rep = vps::convergence_study(cfg, opt);
      vps::write_convergence_csv(dir / "convergence.csv", rep.samples);
      const vps::json j = vps::to_json(rep);
      vps::write_json(dir / "convergence.json", j);
      return finish(j, rep.violations);
    });
  }
  if (*kernel) {
    return guarded("kernel-check", [&] {
      const vps::KernelReport rep = vps::kernel_study(nf_values);
      vps::json j;
      if (rep.rows.size() == 1) {
        j = vps::to_json(rep.rows.front());
      } else {
        j = vps::json::array();
        for (const auto& k : rep.rows) j.push_back(vps::to_json(k));
      }
      if (!out_override.empty()) vps::write_kernel_csv(fs::path(out_override) / "kernel.csv", rep.rows);
      for (const auto& v : rep.violations) std::cerr << vps::json{{"violation", v}}.dump() << '\n';
      return finish(j, rep.violations);
    });
  }
  if (*project) {
    return guarded("project-check", [&] {
      const vps::RunConfig cfg = vps::parse_config(config_path);
      const fs::path dir = output_dir(cfg, out_override);
      const vps::ProjectionReport rep = vps::projection_study(cfg.basis_kind, cfg.domain());
      vps::write_projection_csv(dir / "projection.csv", rep);
      const vps::json j = vps::to_json(rep);
      vps::write_json(dir / "projection.json", j);
      return finish(j, rep.violations);
    });
  }
  if (*invineq) {
    return guarded("invineq-check", [&] {
      const auto parsed = vps::basis_kind_from_string(basis_name);
      if (!parsed) throw vps::ConfigError("unknown basis kind '" + basis_name + "' (allowed: hermite, legendre)");
      const vps::BasisKind kind = *parsed;
      const vps::InverseInequalityReport rep = vps::inverse_inequality_study(kind, max_n, seed);
      const vps::json j = vps::to_json(rep);
      if (!out_override.empty()) {
        vps::write_invineq_csv(fs::path(out_override) / "invineq.csv", rep.table);
        vps::write_json(fs::path(out_override) / "invineq.json", j);
      }
      return finish(j, rep.violations);
    });
  }
  return kOk;
}
