#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cv2x/config.hpp"
#include "cv2x/metrics.hpp"

namespace cv2x {

struct Variant {
  std::string label;
  nlohmann::json overrides = nlohmann::json::object();
};

/// A grid of scenarios: one axis field swept over a value list, crossed with
/// a list of named variants. Each cell runs base.replications replications.
struct SweepSpec {
  std::string name;
  std::string description;
  ScenarioConfig base;
  std::string axis_field;
  std::vector<nlohmann::json> axis_values;
  std::vector<Variant> variants;
};

/// One fully resolved grid cell.
struct SweepCell {
  nlohmann::json axis_value;
  std::string variant;
  ScenarioConfig config;
};

inline constexpr std::size_t kMetricColumns = 11;
inline constexpr std::array<const char*, kMetricColumns> kMetricNames = {
    "pdr",           "ipg_tail_1e5_ms", "ipg_tail_1e4_ms", "prob_ipg_100ms", "aoi_tail_1e5_ms", "aoi_tail_1e4_ms",
    "prob_aoi_0ms", "n_ipg",           "n_aoi",           "r",              "t"};

using MetricValues = std::array<std::optional<double>, kMetricColumns>;
MetricValues metric_values(const MetricsSummary& s);

struct SweepRow {
  std::string sweep;
  std::string axis_field;
  std::string axis_value;
  std::string variant;
  int replication = 0;
  MetricsSummary summary;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

/// Across-replication statistic ("mean" or "stddev") for one cell. The sample
/// standard deviation is absent with fewer than two present values.
struct AggregateRow {
  std::string sweep;
  std::string axis_field;
  std::string axis_value;
  std::string variant;
  std::string statistic;
  MetricValues values{};

  friend bool operator==(const AggregateRow&, const AggregateRow&) = default;
};

/// Rows are ordered axis-major, variant-minor, replication-last.
struct SweepTable {
  std::vector<SweepRow> rows;
  std::vector<AggregateRow> aggregates;

  friend bool operator==(const SweepTable&, const SweepTable&) = default;
};

/// Resolves and validates every cell (base, then variant, then axis value).
/// Throws ConfigError before anything runs if any cell is invalid.
std::vector<SweepCell> expand_sweep(const SweepSpec& spec);

/// Text form of an axis value as it appears in the table.
std::string axis_label(const nlohmann::json& value);

/// Worker count: CV2XSIM_WORKERS when set to a positive integer, otherwise
/// `requested`, otherwise the hardware concurrency.
int resolve_parallelism(int requested);

SweepTable run_sweep(const SweepSpec& spec, int parallelism);

class TraceSink;

/// All replications of one scenario: per-replication rows (sweep "simulate",
/// variant "base") plus the summary of the merged stores.
struct ScenarioRun {
  SweepTable table;
  MetricsSummary pooled;
};

ScenarioRun run_scenario(const ScenarioConfig& cfg, int parallelism, TraceSink* trace = nullptr);

std::vector<AggregateRow> aggregate_rows(const std::vector<SweepRow>& rows);

/// fig_density, fig_density_clean_oneshot, fig_interval_5, fig_interval_30.
std::vector<SweepSpec> builtin_sweeps();
std::optional<SweepSpec> find_builtin_sweep(const std::string& name);

/// JSON sweep description:
///   {"name": ..., "description": ..., "base": {config fields},
///    "axis": {"field": ..., "values": [...]},
///    "variants": [{"label": ..., "overrides": {...}}, ...]}
SweepSpec parse_sweep_spec(const nlohmann::json& raw);
SweepSpec load_sweep_spec_file(const std::string& path);

}  // namespace cv2x
