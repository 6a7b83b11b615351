#include "cv2x/cv2xsim.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <memory>
#include <string>

#include "cv2x/config.hpp"
#include "cv2x/simulation.hpp"
#include "cv2x/sweep.hpp"
#include "cv2x/table_io.hpp"

using nlohmann::json;

struct cv2x_config {
  json raw = json::object();
};

struct cv2x_sweep {
  cv2x::SweepSpec spec;
  json base_overrides = json::object();
};

struct cv2x_table {
  cv2x::SweepTable table;
};

namespace {

thread_local std::string g_last_error;

cv2x_status fail(cv2x_status code, std::string message) {
  g_last_error = std::move(message);
  return code;
}

template <typename F>
cv2x_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return CV2X_OK;
  } catch (const cv2x::ConfigError& e) {
    return fail(CV2X_ERR_CONFIG, e.what());
  } catch (const cv2x::IoError& e) {
    return fail(CV2X_ERR_IO, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(CV2X_ERR_ARGUMENT, e.what());
  } catch (const std::out_of_range& e) {
    return fail(CV2X_ERR_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(CV2X_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(CV2X_ERR_INTERNAL, "unknown error");
  }
}

void require(const void* p, const char* what) {
  if (!p) throw std::invalid_argument(std::string(what) + " is null");
}

double nan_if_absent(const std::optional<double>& v) {
  return v ? *v : std::numeric_limits<double>::quiet_NaN();
}

cv2x_summary to_c(const cv2x::MetricsSummary& s) {
  return {nan_if_absent(s.pdr),
          nan_if_absent(s.ipg_tail_1e5_ms),
          nan_if_absent(s.ipg_tail_1e4_ms),
          nan_if_absent(s.prob_ipg_100ms),
          nan_if_absent(s.aoi_tail_1e5_ms),
          nan_if_absent(s.aoi_tail_1e4_ms),
          nan_if_absent(s.prob_aoi_0ms),
          s.n_ipg,
          s.n_aoi,
          s.r,
          s.t};
}

char* dup_string(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

const std::vector<cv2x::SweepSpec>& presets() {
  static const auto all = cv2x::builtin_sweeps();
  return all;
}

cv2x::ScenarioConfig resolved(const cv2x_config* cfg) { return cv2x::validate_config(cfg->raw); }

void merge_assignment(json& target, const char* assignment) {
  require(assignment, "assignment");
  target.update(cv2x::parse_override(assignment));
}

}  // namespace

extern "C" {

const char* cv2x_version(void) { return "0.1.0"; }

const char* cv2x_last_error(void) { return g_last_error.c_str(); }

void cv2x_string_free(char* s) { std::free(s); }

cv2x_status cv2x_config_new(cv2x_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new cv2x_config;
  });
}

cv2x_status cv2x_config_from_json(const char* text, cv2x_config** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    json raw;
    try {
      raw = json::parse(text);
    } catch (const json::parse_error& e) {
      throw cv2x::ConfigError(std::string("config: ") + e.what());
    }
    if (!raw.is_object()) throw cv2x::ConfigError("config: expected a JSON object");
    auto cfg = std::make_unique<cv2x_config>();
    cfg->raw = std::move(raw);
    *out = cfg.release();
  });
}

cv2x_status cv2x_config_load(const char* path, cv2x_config** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    std::ifstream in(path);
    if (!in) throw cv2x::IoError(std::string("cannot open config '") + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    cv2x_status st = cv2x_config_from_json(text.c_str(), out);
    if (st != CV2X_OK) throw cv2x::ConfigError(g_last_error);
  });
}

cv2x_status cv2x_config_set(cv2x_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    require(cfg, "config");
    require(key, "key");
    require(value, "value");
    cfg->raw[key] = cv2x::parse_override_value(value);
  });
}

cv2x_status cv2x_config_set_assignment(cv2x_config* cfg, const char* key_equals_value) {
  return guarded([&] {
    require(cfg, "config");
    merge_assignment(cfg->raw, key_equals_value);
  });
}

cv2x_status cv2x_config_validate(const cv2x_config* cfg) {
  return guarded([&] {
    require(cfg, "config");
    resolved(cfg);
  });
}

cv2x_status cv2x_config_to_json(const cv2x_config* cfg, char** out) {
  return guarded([&] {
    require(cfg, "config");
    require(out, "out");
    *out = dup_string(cv2x::to_json(resolved(cfg)).dump(2));
  });
}

void cv2x_config_free(cv2x_config* cfg) { delete cfg; }

cv2x_status cv2x_run_replication(const cv2x_config* cfg, uint64_t replication_id, cv2x_summary* out) {
  return guarded([&] {
    require(cfg, "config");
    require(out, "out");
    *out = to_c(cv2x::run_replication(resolved(cfg), replication_id));
  });
}

cv2x_status cv2x_simulate(const cv2x_config* cfg, const char* trace_path, int parallelism, cv2x_table** out,
                          cv2x_summary* pooled) {
  return guarded([&] {
    require(cfg, "config");
    require(out, "out");
    const auto config = resolved(cfg);
    std::ofstream trace_file;
    std::unique_ptr<cv2x::StreamTraceSink> sink;
    if (trace_path) {
      trace_file.open(trace_path, std::ios::trunc);
      if (!trace_file) throw cv2x::IoError(std::string("cannot write trace '") + trace_path + "'");
      sink = std::make_unique<cv2x::StreamTraceSink>(trace_file);
    }
    auto run = cv2x::run_scenario(config, parallelism, sink.get());
    if (trace_file.is_open()) {
      trace_file.flush();
      if (!trace_file) throw cv2x::IoError(std::string("trace write failed for '") + trace_path + "'");
    }
    if (pooled) *pooled = to_c(run.pooled);
    *out = new cv2x_table{std::move(run.table)};
  });
}

size_t cv2x_preset_count(void) { return presets().size(); }

const char* cv2x_preset_name(size_t index) {
  return index < presets().size() ? presets()[index].name.c_str() : nullptr;
}

const char* cv2x_preset_description(size_t index) {
  return index < presets().size() ? presets()[index].description.c_str() : nullptr;
}

cv2x_status cv2x_sweep_preset(const char* name, cv2x_sweep** out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    auto spec = cv2x::find_builtin_sweep(name);
    if (!spec) throw std::invalid_argument(std::string("unknown preset '") + name + "'");
    *out = new cv2x_sweep{std::move(*spec)};
  });
}

cv2x_status cv2x_sweep_load(const char* path, cv2x_sweep** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new cv2x_sweep{cv2x::load_sweep_spec_file(path)};
  });
}

cv2x_status cv2x_sweep_set_assignment(cv2x_sweep* sweep, const char* key_equals_value) {
  return guarded([&] {
    require(sweep, "sweep");
    merge_assignment(sweep->base_overrides, key_equals_value);
  });
}

cv2x_status cv2x_sweep_set_replications(cv2x_sweep* sweep, int replications) {
  return guarded([&] {
    require(sweep, "sweep");
    sweep->base_overrides["replications"] = replications;
  });
}

cv2x_status cv2x_sweep_set_seed(cv2x_sweep* sweep, uint64_t master_seed) {
  return guarded([&] {
    require(sweep, "sweep");
    sweep->base_overrides["master_seed"] = master_seed;
  });
}

cv2x_status cv2x_sweep_run(const cv2x_sweep* sweep, int parallelism, cv2x_table** out) {
  return guarded([&] {
    require(sweep, "sweep");
    require(out, "out");
    cv2x::SweepSpec spec = sweep->spec;
    spec.base = cv2x::apply_overrides(spec.base, sweep->base_overrides);
    *out = new cv2x_table{cv2x::run_sweep(spec, parallelism)};
  });
}

const char* cv2x_sweep_name(const cv2x_sweep* sweep) { return sweep ? sweep->spec.name.c_str() : nullptr; }

void cv2x_sweep_free(cv2x_sweep* sweep) { delete sweep; }

size_t cv2x_table_row_count(const cv2x_table* table) { return table ? table->table.rows.size() : 0; }

cv2x_status cv2x_table_row(const cv2x_table* table, size_t index, cv2x_row* out) {
  return guarded([&] {
    require(table, "table");
    require(out, "out");
    const auto& r = table->table.rows.at(index);
    *out = {r.sweep.c_str(), r.axis_field.c_str(), r.axis_value.c_str(), r.variant.c_str(), r.replication,
            to_c(r.summary)};
  });
}

size_t cv2x_table_aggregate_count(const cv2x_table* table) { return table ? table->table.aggregates.size() : 0; }

cv2x_status cv2x_table_aggregate(const cv2x_table* table, size_t index, cv2x_aggregate* out) {
  return guarded([&] {
    require(table, "table");
    require(out, "out");
    const auto& a = table->table.aggregates.at(index);
    out->sweep = a.sweep.c_str();
    out->axis_field = a.axis_field.c_str();
    out->axis_value = a.axis_value.c_str();
    out->variant = a.variant.c_str();
    out->statistic = a.statistic.c_str();
    for (std::size_t c = 0; c < cv2x::kMetricColumns; ++c) out->values[c] = nan_if_absent(a.values[c]);
  });
}

cv2x_status cv2x_table_write(const cv2x_table* table, const char* format, const char* path) {
  return guarded([&] {
    require(table, "table");
    require(format, "format");
    require(path, "path");
    cv2x::emit_table(table->table, cv2x::parse_table_format(format), path);
  });
}

cv2x_status cv2x_table_write_aggregates(const cv2x_table* table, const char* path) {
  return guarded([&] {
    require(table, "table");
    require(path, "path");
    cv2x::emit_aggregates(table->table, path);
  });
}

cv2x_status cv2x_table_to_csv(const cv2x_table* table, char** out) {
  return guarded([&] {
    require(table, "table");
    require(out, "out");
    *out = dup_string(cv2x::rows_to_csv(table->table.rows));
  });
}

void cv2x_table_free(cv2x_table* table) { delete table; }

}  // extern "C"
