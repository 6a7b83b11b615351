// cv2xsim command line: simulate one scenario, run a sweep grid, list presets.
// Talks to the simulator only through the C interface.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cv2x/cv2xsim.h"

namespace fs = std::filesystem;

namespace {

struct CliError {
  int code;
};

void check(cv2x_status st, const char* what) {
  if (st == CV2X_OK) return;
  std::cerr << "cv2xsim: " << what << ": " << cv2x_last_error() << "\n";
  throw CliError{st == CV2X_ERR_IO ? 3 : 2};
}

std::string fmt(double v) {
  if (std::isnan(v)) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void print_summary(const cv2x_summary& s) {
  std::cout << "pdr              " << fmt(s.pdr) << "\n"
            << "ipg_tail_1e5_ms  " << fmt(s.ipg_tail_1e5_ms) << "\n"
            << "ipg_tail_1e4_ms  " << fmt(s.ipg_tail_1e4_ms) << "\n"
            << "prob_ipg_100ms   " << fmt(s.prob_ipg_100ms) << "\n"
            << "aoi_tail_1e5_ms  " << fmt(s.aoi_tail_1e5_ms) << "\n"
            << "aoi_tail_1e4_ms  " << fmt(s.aoi_tail_1e4_ms) << "\n"
            << "prob_aoi_0ms     " << fmt(s.prob_aoi_0ms) << "\n"
            << "n_ipg            " << s.n_ipg << "\n"
            << "n_aoi            " << s.n_aoi << "\n"
            << "r                " << s.r << "\n"
            << "t                " << s.t << "\n";
}

void print_means(const cv2x_table* table) {
  std::printf("%-14s %-24s %10s %12s %12s %10s %12s\n", "axis_value", "variant", "pdr", "ipg_1e5_ms", "ipg_1e4_ms",
              "p_ipg_100", "aoi_1e5_ms");
  for (size_t i = 0; i < cv2x_table_aggregate_count(table); ++i) {
    cv2x_aggregate a;
    check(cv2x_table_aggregate(table, i, &a), "read aggregate");
    if (std::string(a.statistic) != "mean") continue;
    std::printf("%-14s %-24s %10s %12s %12s %10s %12s\n", a.axis_value, a.variant, fmt(a.values[0]).c_str(),
                fmt(a.values[1]).c_str(), fmt(a.values[2]).c_str(), fmt(a.values[3]).c_str(),
                fmt(a.values[4]).c_str());
  }
}

void write_outputs(const cv2x_table* table, const std::string& stem, const std::string& format,
                   const std::optional<std::string>& out_dir) {
  if (!out_dir) {
    char* csv = nullptr;
    check(cv2x_table_to_csv(table, &csv), "format table");
    std::cout << csv;
    cv2x_string_free(csv);
    return;
  }
  std::error_code ec;
  fs::create_directories(*out_dir, ec);
  if (ec) {
    std::cerr << "cv2xsim: cannot create '" << *out_dir << "': " << ec.message() << "\n";
    throw CliError{3};
  }
  fs::path main = fs::path(*out_dir) / (stem + "." + format);
  check(cv2x_table_write(table, format.c_str(), main.c_str()), "write table");
  std::cerr << "wrote " << main.string() << "\n";
  if (format == "csv") {
    fs::path agg = fs::path(*out_dir) / (stem + "_aggregate.csv");
    check(cv2x_table_write_aggregates(table, agg.c_str()), "write aggregates");
    std::cerr << "wrote " << agg.string() << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"C-V2X Mode 4 SPS / one-shot / smart-jammer Monte Carlo simulator"};
  app.require_subcommand(1);

  auto* simulate = app.add_subcommand("simulate", "Run one scenario for all configured replications");
  std::optional<std::string> config_path;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::string> trace_path;
  std::string format = "csv";
  int parallel = 0;
  simulate->add_option("--config", config_path, "Scenario config file (JSON)");
  simulate->add_option("--set", sets, "Override a config field, key=value (repeatable)");
  simulate->add_option("--seed", seed, "Master seed");
  simulate->add_option("--out", out_dir, "Output directory (default: CSV rows to stdout)");
  simulate->add_option("--trace", trace_path, "Write per-period vehicle/attacker trace to this file");
  simulate->add_option("--parallel", parallel, "Worker threads (CV2XSIM_WORKERS overrides)");
  simulate->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  auto* sweep = app.add_subcommand("sweep", "Run a grid of scenarios");
  std::optional<std::string> preset;
  std::optional<std::string> spec_path;
  std::optional<int> reps;
  auto* preset_opt = sweep->add_option("--preset", preset, "Built-in sweep name (see 'presets')");
  auto* spec_opt = sweep->add_option("--spec", spec_path, "Sweep description file (JSON)");
  preset_opt->excludes(spec_opt);
  sweep->add_option("--reps", reps, "Replications per grid cell");
  sweep->add_option("--parallel", parallel, "Worker threads (CV2XSIM_WORKERS overrides)");
  sweep->add_option("--set", sets, "Override a base config field, key=value (repeatable)");
  sweep->add_option("--seed", seed, "Master seed");
  sweep->add_option("--out", out_dir, "Output directory (default: CSV rows to stdout)");
  sweep->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  auto* list = app.add_subcommand("presets", "List built-in sweeps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*list) {
      for (size_t i = 0; i < cv2x_preset_count(); ++i)
        std::cout << cv2x_preset_name(i) << "\t" << cv2x_preset_description(i) << "\n";
      return 0;
    }

    if (*simulate) {
      cv2x_config* cfg = nullptr;
      if (config_path)
        check(cv2x_config_load(config_path->c_str(), &cfg), "load config");
      else
        check(cv2x_config_new(&cfg), "create config");
      std::unique_ptr<cv2x_config, decltype(&cv2x_config_free)> cfg_guard(cfg, cv2x_config_free);
      for (const auto& s : sets) check(cv2x_config_set_assignment(cfg, s.c_str()), "--set");
      if (seed) check(cv2x_config_set(cfg, "master_seed", std::to_string(*seed).c_str()), "--seed");
      check(cv2x_config_validate(cfg), "invalid config");

      cv2x_table* table = nullptr;
      cv2x_summary pooled;
      check(cv2x_simulate(cfg, trace_path ? trace_path->c_str() : nullptr, parallel, &table, &pooled), "simulate");
      std::unique_ptr<cv2x_table, decltype(&cv2x_table_free)> table_guard(table, cv2x_table_free);
      if (out_dir) {
        std::cout << "pooled over " << cv2x_table_row_count(table) << " replication(s)\n";
        print_summary(pooled);
      }
      write_outputs(table, "simulate", format, out_dir);
      return 0;
    }

    if (*sweep) {
      if (!preset && !spec_path) {
        std::cerr << "cv2xsim: sweep needs --preset or --spec\n";
        return 2;
      }
      cv2x_sweep* handle = nullptr;
      if (preset)
        check(cv2x_sweep_preset(preset->c_str(), &handle), "preset");
      else
        check(cv2x_sweep_load(spec_path->c_str(), &handle), "load sweep");
      std::unique_ptr<cv2x_sweep, decltype(&cv2x_sweep_free)> sweep_guard(handle, cv2x_sweep_free);
      for (const auto& s : sets) check(cv2x_sweep_set_assignment(handle, s.c_str()), "--set");
      if (reps) check(cv2x_sweep_set_replications(handle, *reps), "--reps");
      if (seed) check(cv2x_sweep_set_seed(handle, *seed), "--seed");

      cv2x_table* table = nullptr;
      check(cv2x_sweep_run(handle, parallel, &table), "sweep");
      std::unique_ptr<cv2x_table, decltype(&cv2x_table_free)> table_guard(table, cv2x_table_free);
      if (out_dir) print_means(table);
      write_outputs(table, cv2x_sweep_name(handle), format, out_dir);
      return 0;
    }
  } catch (const CliError& e) {
    return e.code;
  }
  return 0;
}
