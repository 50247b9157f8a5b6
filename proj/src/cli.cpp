#include "fdgmaa/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fdgmaa/errors.hpp"
#include "fdgmaa/harness.hpp"
#include "fdgmaa/serialization.hpp"

namespace fdgmaa {

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitAudit = 1;
constexpr int kExitConfig = 2;

bool is_dual(Algorithm a) { return a != Algorithm::dps; }

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

fs::path prepare_output(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
  return fs::path(dir);
}

bool run_audits_clean(const RunResult& r) {
  return r.certificate.failed == 0 && r.conservation_failures == 0;
}

int command_run(const ExperimentConfig& config, const std::string& out_dir, Execution exec,
                std::ostream& out) {
  const fs::path dir = prepare_output(out_dir);
  const Experiment ex = prepare_experiment(config);

  bool clean = true;
  std::vector<DenseMatrix> iterates;
  for (Algorithm a : config.algorithms) {
    RunOptions opts;
    opts.exec = exec;
    opts.strict = false;
    opts.record_iterates = is_dual(a) && iterates.empty();
    RunResult r = run_algorithm(a, config, ex.instance, ex.schedule, opts);
    const fs::path csv = dir / (to_string(a) + ".csv");
    write_csv(r.rows, csv.string());
    const auto& last = r.rows.back();
    out << to_string(a) << ": " << r.rows.size() << " rows, final primal_error "
        << fmt(last.primal_error);
    if (last.dual_gap) out << ", dual_gap " << fmt(*last.dual_gap);
    if (is_dual(a)) {
      out << ", certificate failures " << r.certificate.failed << "/" << r.certificate.checked;
    }
    out << " -> " << csv.string() << '\n';
    clean = clean && run_audits_clean(r);
    if (opts.record_iterates) iterates = std::move(r.iterates);
  }

  write_json_file({{"config", config_to_json(config)},
                   {"instance", instance_to_json(ex.instance)},
                   {"schedule", schedule_to_json(ex.schedule)}},
                  (dir / "instance.json").string());
  const RateConstants constants = compute_rate_constants(config, ex.schedule, iterates);
  write_json_file(rate_constants_to_json(constants), (dir / "constants.json").string());
  out << "instance -> " << (dir / "instance.json").string() << '\n'
      << "constants -> " << (dir / "constants.json").string() << '\n';
  return clean ? kExitOk : kExitAudit;
}

int command_verify(const ExperimentConfig& config, Execution exec, std::ostream& out) {
  const Experiment ex = prepare_experiment(config);
  std::vector<Algorithm> algorithms;
  for (Algorithm a : config.algorithms) {
    if (is_dual(a)) algorithms.push_back(a);
  }
  if (algorithms.empty()) algorithms = {Algorithm::fdgm, Algorithm::fdgm_aa};
  const SafeguardParams params = config.safeguard();

  bool all = true;
  auto report = [&](Algorithm a, const std::string& name, bool ok, const std::string& detail) {
    out << (ok ? "PASS " : "FAIL ") << to_string(a) << ' ' << name << ": " << detail << '\n';
    all = all && ok;
  };
  for (Algorithm a : algorithms) {
    RunOptions opts;
    opts.exec = exec;
    opts.strict = false;
    opts.record_edges = true;
    const RunResult r = run_algorithm(a, config, ex.instance, ex.schedule, opts);
    report(a, "pairwise descent certificate", r.certificate.failed == 0,
           std::to_string(r.certificate.failed) + " failures in " +
               std::to_string(r.certificate.checked) + " edge updates, worst margin " +
               fmt(r.certificate.worst_margin));
    const AuditReport cons = audit_conservation(r);
    report(a, "conservation", cons.passed,
           std::to_string(cons.failures) + " failures in " + std::to_string(cons.checked) +
               " iterations");
    const AuditReport mono = audit_monotone_dual(r.rows, config.oracle_tol);
    report(a, "monotone dual", mono.passed,
           std::to_string(mono.failures) + " increases, worst margin " + fmt(mono.worst_margin));
    const AuditReport acc =
        audit_accumulated_descent(r.rows, r.edges, params.theta1(), config.oracle_tol);
    report(a, "accumulated descent", acc.passed,
           std::to_string(acc.failures) + " failures, worst margin " + fmt(acc.worst_margin));
    const AuditReport pd = audit_primal_dual(r.rows, config.n, config.lipschitz());
    report(a, "primal-dual bound", pd.passed,
           std::to_string(pd.failures) + " failures, worst margin " + fmt(pd.worst_margin));
  }
  return all ? kExitOk : kExitAudit;
}

int command_sweep(const ExperimentConfig& config, const std::string& param,
                  const std::vector<std::string>& values, const std::string& out_dir,
                  Execution exec, std::ostream& out) {
  static const std::vector<std::string> counts = {"seed", "n", "d", "samples_per_node",
                                                  "period", "memory", "iters"};
  static const std::vector<std::string> reals = {"lambda", "beta", "c1", "c2", "oracle_tol",
                                                 "dps_step"};
  const bool is_count = std::find(counts.begin(), counts.end(), param) != counts.end();
  const bool is_real = std::find(reals.begin(), reals.end(), param) != reals.end();
  if (!is_count && !is_real) throw ConfigError("sweep: unsupported parameter '" + param + "'");
  if (values.empty()) throw ConfigError("sweep: no values given");

  std::vector<ExperimentConfig> grid;
  for (const auto& v : values) {
    Json j = config_to_json(config);
    try {
      if (is_count) {
        if (v.empty() || v.front() == '-') throw std::invalid_argument(v);
        j[param] = static_cast<std::uint64_t>(std::stoull(v));
      } else {
        j[param] = std::stod(v);
      }
    } catch (const std::exception&) {
      throw ConfigError("sweep: cannot parse value '" + v + "' for '" + param + "'");
    }
    grid.push_back(config_from_json(j));
  }

  const fs::path dir = prepare_output(out_dir);
  const fs::path summary_path = dir / ("sweep_" + param + ".csv");
  std::ofstream summary(summary_path);
  if (!summary) throw IoError("cannot write '" + summary_path.string() + "'");
  summary << "value,algorithm,final_primal_error,final_dual_gap,certificate_failures\n";

  bool clean = true;
  std::map<Algorithm, std::pair<double, std::string>> best;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const Experiment ex = prepare_experiment(grid[g]);
    for (Algorithm a : grid[g].algorithms) {
      RunOptions opts;
      opts.exec = exec;
      opts.strict = false;
      const RunResult r = run_algorithm(a, grid[g], ex.instance, ex.schedule, opts);
      write_csv(r.rows, (dir / ("sweep_" + param + "_" + values[g] + "_" + to_string(a) + ".csv"))
                            .string());
      const auto& last = r.rows.back();
      char gap[40] = "";
      if (last.dual_gap) std::snprintf(gap, sizeof gap, "%.17g", *last.dual_gap);
      char line[256];
      std::snprintf(line, sizeof line, "%s,%s,%.17g,%s,%zu\n", values[g].c_str(),
                    to_string(a).c_str(), last.primal_error, gap, r.certificate.failed);
      summary << line;
      out << param << '=' << values[g] << ' ' << to_string(a) << ": final primal_error "
          << fmt(last.primal_error) << '\n';
      auto it = best.find(a);
      if (it == best.end() || last.primal_error < it->second.first) {
        best[a] = {last.primal_error, values[g]};
      }
      clean = clean && run_audits_clean(r);
    }
  }
  for (const auto& [a, b] : best) {
    out << "best " << param << " for " << to_string(a) << ": " << b.second
        << " (primal_error " << fmt(b.first) << ")\n";
  }
  out << "summary -> " << summary_path.string() << '\n';
  return clean ? kExitOk : kExitAudit;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dual gradient consensus optimization with Anderson acceleration"};
  app.require_subcommand(1);
  bool serial = false;
  app.add_flag("--serial", serial, "Use the serial reference kernels");

  std::string config_path;
  std::string out_dir;
  auto* run = app.add_subcommand("run", "Run every configured algorithm and write CSV traces");
  run->add_option("--config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--out", out_dir, "Output directory (default: output_path of the config)");

  auto* verify = app.add_subcommand("verify", "Run the descent and conservation audits");
  verify->add_option("--config", config_path, "Experiment config (JSON)")->required();

  std::string param;
  std::vector<std::string> values;
  auto* sweep = app.add_subcommand("sweep", "Grid over one config parameter");
  sweep->add_option("--config", config_path, "Experiment config (JSON)")->required();
  sweep->add_option("--param", param, "Config key to vary")->required();
  sweep->add_option("--values", values, "Values to try")->required();
  sweep->add_option("--out", out_dir, "Output directory (default: output_path of the config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  const Execution exec = serial ? Execution::serial : Execution::parallel;
  try {
    ExperimentConfig config;
    try {
      config = config_from_json(read_json_file(config_path));
    } catch (const IoError& e) {
      err << "error: " << e.what() << '\n';
      return kExitConfig;
    }
    if (out_dir.empty()) out_dir = config.output_path;
    if (*run) return command_run(config, out_dir, exec, out);
    if (*verify) return command_verify(config, exec, out);
    return command_sweep(config, param, values, out_dir, exec, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitAudit;
  }
}

}  // namespace fdgmaa
