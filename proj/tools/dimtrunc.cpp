// Command-line driver: predict, run, fit, plot, oracle-check.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dimtrunc/dimtrunc.hpp"

namespace fs = std::filesystem;
using namespace dimtrunc;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitGap = 4;

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  bool paper_scale = false;
  std::optional<unsigned> workers;
};

ExperimentConfig resolve_config(const CommonOptions& o) {
  ExperimentConfig c = o.config_path.empty() ? ExperimentConfig{} : load_config(o.config_path);
  if (o.paper_scale) c.apply_paper_scale();
  if (o.seed) c.seed = *o.seed;
  if (o.workers) c.workers = *o.workers;
  c.validate();
  return c;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
}

int cmd_predict(const CommonOptions& o, bool write_csv_file) {
  const ExperimentConfig c = resolve_config(o);
  const auto preds = predict(c);
  std::cout << prediction_text(preds);
  if (write_csv_file) {
    const fs::path path = fs::path(o.out_dir) / "predict.csv";
    write_text(path, prediction_csv(preds));
    std::cout << "wrote " << path.string() << "\n";
  }
  return 0;
}

int cmd_run(const CommonOptions& o) {
  const ExperimentConfig c = resolve_config(o);
  const RunResult result = run(c, [](const std::string& msg) { std::cerr << msg << "\n"; });
  fs::create_directories(o.out_dir);
  for (std::size_t i = 0; i < c.theta_list.size(); ++i) {
    for (std::size_t q = 0; q < c.quantities.size(); ++q) {
      const ErrorTable& table = result.tables[i][q];
      const fs::path path = fs::path(o.out_dir) / table_file_name(c.theta_list[i], c.quantities[q]);
      write_csv(table, path.string());
      std::cout << path.string();
      if (table.rows.size() >= 2) {
        try {
          const RateFit fit = fit_rate(table, default_s_min(table));
          std::cout << "  slope=" << fit.slope << "  expected=" << expected_rate(c.theta_list[i]);
        } catch (const ConfigError&) {
        }
      }
      std::cout << "\n";
    }
  }
  return 0;
}

int cmd_fit(const std::string& table_path, std::optional<std::size_t> s_min) {
  const ErrorTable table = read_csv(table_path);
  if (table.rows.size() < 2)
    throw ConfigError("rate fit needs a table with at least 2 rows, '" + table_path + "' has " +
                      std::to_string(table.rows.size()));
  const RateFit fit = fit_rate(table, s_min.value_or(default_s_min(table)));
  std::cout << "slope " << format_double(fit.slope) << "\n"
            << "intercept " << format_double(fit.intercept) << "\n"
            << "residual " << format_double(fit.residual) << "\n"
            << "rows " << fit.rows_used << "\n";
  if (fit.zero_rows_excluded)
    std::cerr << "warning: excluded " << fit.zero_rows_excluded << " zero-error rows\n";
  if (auto theta = table.meta_number("theta")) {
    const double rate = expected_rate(*theta);
    std::cout << "expected " << format_double(rate) << "\n"
              << "gap " << format_double(std::abs(fit.slope - rate)) << "\n";
  }
  return 0;
}

int cmd_plot(const std::vector<std::string>& paths, const std::string& out) {
  std::vector<ErrorTable> tables;
  for (const auto& p : paths) tables.push_back(read_csv(p));
  write_text(out, render_svg(tables));
  std::cout << "wrote " << out << "\n";
  return 0;
}

int cmd_oracle_check(const std::string& spec_path, std::optional<unsigned> workers) {
  OracleCheckSpec spec = spec_path.empty() ? OracleCheckSpec{} : load_oracle_spec(spec_path);
  if (workers) spec.workers = *workers;
  const OracleCheckReport report = oracle_check(spec);
  std::printf("%4s %22s %22s %22s %12s %s\n", "s", "exact(q)", "exact(q_check)", "qmc", "rel_gap",
              "status");
  for (const auto& r : report.rows) {
    const bool exact_zero = r.exact == 0.0 && r.qmc == 0.0;
    std::printf("%4zu %22.15e %22.15e %22.15e %12.4e %s\n", r.s, r.exact, r.exact_check, r.qmc,
                r.relative_gap,
                r.pass ? (exact_zero ? "pass (exact zero)" : "pass")
                       : (r.converged ? "FAIL" : "FAIL (quadrature not converged)"));
  }
  std::printf("%s\n", report.pass ? "oracle check passed" : "oracle check FAILED");
  return report.pass ? 0 : kExitGap;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dimension truncation experiments for parametric diffusion problems"};
  app.require_subcommand(1);

  CommonOptions common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config_path, "experiment config (JSON)");
    sub->add_option("--seed", common.seed, "random shift seed");
    sub->add_option("--out", common.out_dir, "output directory");
    sub->add_flag("--paper-scale", common.paper_scale,
                  "h = 2^-5, 2^20 nodes, s' = 2048, s = 2..512");
    sub->add_option("--workers", common.workers, "worker threads (default: all cores)");
  };

  auto* predict_cmd = app.add_subcommand("predict", "expected rates and closed-form bounds");
  add_common(predict_cmd);

  auto* run_cmd = app.add_subcommand("run", "estimate truncation errors, one CSV per theta");
  add_common(run_cmd);

  std::string table_path;
  std::optional<std::size_t> s_min;
  auto* fit_cmd = app.add_subcommand("fit", "log-log rate fit of an error table");
  fit_cmd->add_option("table", table_path, "error table CSV")->required();
  fit_cmd->add_option("--s-min", s_min, "smallest s used (default: upper half of the table)");

  std::vector<std::string> plot_inputs;
  std::string plot_out = "truncation.svg";
  auto* plot_cmd = app.add_subcommand("plot", "log-log SVG of one or more error tables");
  plot_cmd->add_option("tables", plot_inputs, "error table CSVs")->required();
  plot_cmd->add_option("--out", plot_out, "output SVG path");

  std::string oracle_spec;
  std::optional<unsigned> oracle_workers;
  auto* oracle_cmd = app.add_subcommand("oracle-check", "tensor quadrature vs lattice estimator");
  oracle_cmd->add_option("spec", oracle_spec, "oracle spec (JSON); defaults when omitted");
  oracle_cmd->add_option("--workers", oracle_workers, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*predict_cmd) return cmd_predict(common, predict_cmd->count("--out") > 0);
    if (*run_cmd) return cmd_run(common);
    if (*fit_cmd) return cmd_fit(table_path, s_min);
    if (*plot_cmd) return cmd_plot(plot_inputs, plot_out);
    if (*oracle_cmd) return cmd_oracle_check(oracle_spec, oracle_workers);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return 0;
}
