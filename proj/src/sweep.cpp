#include "cv2x/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <fstream>
#include <sstream>
#include <thread>

#include "cv2x/simulation.hpp"

using nlohmann::json;

namespace cv2x {

MetricValues metric_values(const MetricsSummary& s) {
  return {s.pdr,
          s.ipg_tail_1e5_ms,
          s.ipg_tail_1e4_ms,
          s.prob_ipg_100ms,
          s.aoi_tail_1e5_ms,
          s.aoi_tail_1e4_ms,
          s.prob_aoi_0ms,
          static_cast<double>(s.n_ipg),
          static_cast<double>(s.n_aoi),
          static_cast<double>(s.r),
          static_cast<double>(s.t)};
}

std::string axis_label(const json& value) { return value.is_string() ? value.get<std::string>() : value.dump(); }

std::vector<SweepCell> expand_sweep(const SweepSpec& spec) {
  if (spec.axis_values.empty()) throw ConfigError("axis: value list is empty");
  if (spec.variants.empty()) throw ConfigError("variants: list is empty");
  check_invariants(spec.base);
  std::vector<SweepCell> cells;
  for (const auto& value : spec.axis_values) {
    for (const auto& variant : spec.variants) {
      ScenarioConfig cfg;
      try {
        cfg = apply_overrides(spec.base, variant.overrides);
        cfg = apply_overrides(cfg, json{{spec.axis_field, value}});
      } catch (const ConfigError& e) {
        throw ConfigError(std::string(e.what()) + " (sweep '" + spec.name + "', variant '" + variant.label +
                          "', " + spec.axis_field + "=" + axis_label(value) + ")");
      }
      cells.push_back({value, variant.label, cfg});
    }
  }
  return cells;
}

int resolve_parallelism(int requested) {
  if (const char* env = std::getenv("CV2XSIM_WORKERS")) {
    char* end = nullptr;
    long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<int>(n);
  }
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<AggregateRow> aggregate_rows(const std::vector<SweepRow>& rows) {
  std::vector<AggregateRow> out;
  std::size_t i = 0;
  while (i < rows.size()) {
    std::size_t j = i;
    while (j < rows.size() && rows[j].axis_value == rows[i].axis_value && rows[j].variant == rows[i].variant &&
           rows[j].sweep == rows[i].sweep)
      ++j;
    AggregateRow mean{rows[i].sweep, rows[i].axis_field, rows[i].axis_value, rows[i].variant, "mean", {}};
    AggregateRow sd = mean;
    sd.statistic = "stddev";
    for (std::size_t c = 0; c < kMetricColumns; ++c) {
      std::vector<double> xs;
      for (std::size_t k = i; k < j; ++k)
        if (auto v = metric_values(rows[k].summary)[c]) xs.push_back(*v);
      if (xs.empty()) continue;
      double m = 0.0;
      for (double x : xs) m += x;
      m /= static_cast<double>(xs.size());
      mean.values[c] = m;
      if (xs.size() >= 2) {
        double ss = 0.0;
        for (double x : xs) ss += (x - m) * (x - m);
        sd.values[c] = std::sqrt(ss / static_cast<double>(xs.size() - 1));
      }
    }
    out.push_back(std::move(mean));
    out.push_back(std::move(sd));
    i = j;
  }
  return out;
}

namespace {

/// Runs job(i) for i in [0, n) on up to `parallelism` threads. The first
/// exception thrown by any job is rethrown after all workers finish.
template <typename Job>
void parallel_for(std::size_t n, int parallelism, Job&& job) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        job(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(resolve_parallelism(parallelism)), n);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

SweepTable run_sweep(const SweepSpec& spec, int parallelism) {
  const auto cells = expand_sweep(spec);
  const auto reps = static_cast<std::size_t>(spec.base.replications);
  const std::size_t jobs = cells.size() * reps;

  std::vector<MetricsSummary> results(jobs);
  parallel_for(jobs, parallelism, [&](std::size_t job) {
    results[job] = run_replication(cells[job / reps].config, job % reps);
  });

  SweepTable table;
  table.rows.reserve(jobs);
  for (std::size_t job = 0; job < jobs; ++job) {
    const auto& cell = cells[job / reps];
    table.rows.push_back({spec.name, spec.axis_field, axis_label(cell.axis_value), cell.variant,
                          static_cast<int>(job % reps), results[job]});
  }
  table.aggregates = aggregate_rows(table.rows);
  return table;
}

ScenarioRun run_scenario(const ScenarioConfig& cfg, int parallelism, TraceSink* trace) {
  check_invariants(cfg);
  const auto reps = static_cast<std::size_t>(cfg.replications);
  std::vector<MetricsStore> stores(reps);
  parallel_for(reps, parallelism, [&](std::size_t rep) { stores[rep] = simulate_replication(cfg, rep, trace); });

  ScenarioRun run;
  MetricsStore pooled;
  for (std::size_t rep = 0; rep < reps; ++rep) {
    run.table.rows.push_back({"simulate", "", "", "base", static_cast<int>(rep), summarize(stores[rep], cfg.period_ms)});
    pooled.merge(stores[rep]);
  }
  run.table.aggregates = aggregate_rows(run.table.rows);
  run.pooled = summarize(pooled, cfg.period_ms);
  return run;
}

namespace {

json oneshot(int lo, int hi) { return {{"oneshot_enabled", true}, {"oneshot_range", {lo, hi}}}; }

SweepSpec interval_sweep(const std::string& name, int count) {
  SweepSpec s;
  s.name = name;
  s.description = std::to_string(count) + " targets, " + std::to_string(count) +
                  " attackers; fixed attacker hold 1..15 periods; no one-shot vs one-shot (2,6) and (5,15)";
  s.base.num_targets = count;
  s.base.num_attackers = count;
  s.axis_field = "attacker_interval";
  for (int k = 1; k <= 15; ++k) s.axis_values.push_back(k);
  s.variants = {{"no_oneshot", json::object()}, {"oneshot_2_6", oneshot(2, 6)}, {"oneshot_5_15", oneshot(5, 15)}};
  return s;
}

}  // namespace

std::vector<SweepSpec> builtin_sweeps() {
  SweepSpec density;
  density.name = "fig_density";
  density.description = "targets 5..70; no attackers, 5 attackers, 5 attackers with one-shot (2,6) and (5,15)";
  density.base.num_attackers = 5;
  density.axis_field = "num_targets";
  for (int v : {5, 10, 20, 30, 40, 50, 60, 70}) density.axis_values.push_back(v);
  density.variants = {
      {"no_attack", {{"num_attackers", 0}}},
      {"attack", json::object()},
      {"attack_oneshot_2_6", oneshot(2, 6)},
      {"attack_oneshot_5_15", oneshot(5, 15)},
  };

  SweepSpec clean = density;
  clean.name = "fig_density_clean_oneshot";
  clean.description = "targets 5..70 without attackers; one-shot (2,6) and (5,15)";
  clean.base.num_attackers = 0;
  clean.variants = {{"no_attack_oneshot_2_6", oneshot(2, 6)}, {"no_attack_oneshot_5_15", oneshot(5, 15)}};

  return {density, clean, interval_sweep("fig_interval_5", 5), interval_sweep("fig_interval_30", 30)};
}

std::optional<SweepSpec> find_builtin_sweep(const std::string& name) {
  for (auto& s : builtin_sweeps())
    if (s.name == name) return s;
  return std::nullopt;
}

SweepSpec parse_sweep_spec(const json& raw) {
  if (!raw.is_object()) throw ConfigError("sweep: expected a JSON object");
  SweepSpec s;
  s.name = raw.value("name", std::string("sweep"));
  s.description = raw.value("description", std::string());
  s.base = validate_config(raw.value("base", json::object()));
  if (!raw.contains("axis") || !raw["axis"].is_object()) throw ConfigError("axis: missing");
  const auto& axis = raw["axis"];
  if (!axis.contains("field") || !axis["field"].is_string()) throw ConfigError("axis.field: missing");
  s.axis_field = axis["field"].get<std::string>();
  if (!axis.contains("values") || !axis["values"].is_array()) throw ConfigError("axis.values: missing");
  for (const auto& v : axis["values"]) s.axis_values.push_back(v);
  if (raw.contains("variants")) {
    for (const auto& v : raw["variants"]) {
      if (!v.is_object() || !v.contains("label")) throw ConfigError("variants: each entry needs a label");
      s.variants.push_back({v["label"].get<std::string>(), v.value("overrides", json::object())});
    }
  } else {
    s.variants.push_back({"base", json::object()});
  }
  expand_sweep(s);
  return s;
}

SweepSpec load_sweep_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("sweep: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_sweep_spec(json::parse(buf.str()));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("sweep: ") + e.what());
  }
}

}  // namespace cv2x
