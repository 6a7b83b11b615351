#include "cv2x/table_io.hpp"

#include <charconv>
#include <fstream>
#include <system_error>
#include <unistd.h>

#include <json.hpp>

using nlohmann::json;

namespace cv2x {

namespace {

constexpr std::array<const char*, 5> kKeyColumns = {"sweep", "axis_field", "axis_value", "variant", "replication"};
constexpr std::size_t kColumns = kKeyColumns.size() + kMetricColumns;

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_optional(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void append_line(std::string& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += quote(fields[i]);
  }
  out += '\n';
}

std::vector<std::vector<std::string>> split_csv(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    any = true;
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      fields.push_back(std::move(field));
      field.clear();
      records.push_back(std::move(fields));
      fields.clear();
      any = false;
    } else {
      field += c;
    }
  }
  if (quoted) throw IoError("csv: unterminated quoted field");
  if (any) {
    fields.push_back(std::move(field));
    records.push_back(std::move(fields));
  }
  return records;
}

std::optional<double> parse_optional(const std::string& s) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw IoError("csv: bad number '" + s + "'");
  return v;
}

std::uint64_t parse_count(const std::string& s) {
  std::uint64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw IoError("csv: bad count '" + s + "'");
  return v;
}

std::vector<std::vector<std::string>> body(std::string_view text) {
  auto records = split_csv(text);
  if (records.empty()) throw IoError("csv: missing header");
  std::string header = records.front().empty() ? "" : records.front()[0];
  for (std::size_t i = 1; i < records.front().size(); ++i) header += "," + records.front()[i];
  if (header != csv_header()) throw IoError("csv: unexpected header");
  records.erase(records.begin());
  for (const auto& r : records)
    if (r.size() != kColumns) throw IoError("csv: wrong field count");
  return records;
}

MetricsSummary summary_from(const std::vector<std::string>& f, std::size_t at) {
  MetricsSummary s;
  s.pdr = parse_optional(f[at + 0]);
  s.ipg_tail_1e5_ms = parse_optional(f[at + 1]);
  s.ipg_tail_1e4_ms = parse_optional(f[at + 2]);
  s.prob_ipg_100ms = parse_optional(f[at + 3]);
  s.aoi_tail_1e5_ms = parse_optional(f[at + 4]);
  s.aoi_tail_1e4_ms = parse_optional(f[at + 5]);
  s.prob_aoi_0ms = parse_optional(f[at + 6]);
  s.n_ipg = parse_count(f[at + 7]);
  s.n_aoi = parse_count(f[at + 8]);
  s.r = parse_count(f[at + 9]);
  s.t = parse_count(f[at + 10]);
  return s;
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> json_optional(const json& v) {
  if (v.is_null()) return std::nullopt;
  return v.get<double>();
}

}  // namespace

TableFormat parse_table_format(std::string_view text) {
  if (text == "csv") return TableFormat::csv;
  if (text == "json") return TableFormat::json;
  throw std::invalid_argument("format: expected 'csv' or 'json', got '" + std::string(text) + "'");
}

std::string csv_header() {
  std::string h;
  for (const char* c : kKeyColumns) h += std::string(h.empty() ? "" : ",") + c;
  for (const char* c : kMetricNames) h += std::string(",") + c;
  return h;
}

std::string rows_to_csv(const std::vector<SweepRow>& rows) {
  std::string out = csv_header() + "\n";
  for (const auto& r : rows) {
    std::vector<std::string> f = {r.sweep, r.axis_field, r.axis_value, r.variant, std::to_string(r.replication)};
    const auto& s = r.summary;
    for (const auto& v : {s.pdr, s.ipg_tail_1e5_ms, s.ipg_tail_1e4_ms, s.prob_ipg_100ms, s.aoi_tail_1e5_ms,
                          s.aoi_tail_1e4_ms, s.prob_aoi_0ms})
      f.push_back(format_optional(v));
    for (auto n : {s.n_ipg, s.n_aoi, s.r, s.t}) f.push_back(std::to_string(n));
    append_line(out, f);
  }
  return out;
}

std::string aggregates_to_csv(const std::vector<AggregateRow>& rows) {
  std::string out = csv_header() + "\n";
  for (const auto& r : rows) {
    std::vector<std::string> f = {r.sweep, r.axis_field, r.axis_value, r.variant, r.statistic};
    for (const auto& v : r.values) f.push_back(format_optional(v));
    append_line(out, f);
  }
  return out;
}

std::string table_to_json(const SweepTable& table) {
  json rows = json::array();
  for (const auto& r : table.rows) {
    json o = {{"sweep", r.sweep},         {"axis_field", r.axis_field}, {"axis_value", r.axis_value},
              {"variant", r.variant},     {"replication", r.replication}};
    const auto& s = r.summary;
    o["pdr"] = optional_json(s.pdr);
    o["ipg_tail_1e5_ms"] = optional_json(s.ipg_tail_1e5_ms);
    o["ipg_tail_1e4_ms"] = optional_json(s.ipg_tail_1e4_ms);
    o["prob_ipg_100ms"] = optional_json(s.prob_ipg_100ms);
    o["aoi_tail_1e5_ms"] = optional_json(s.aoi_tail_1e5_ms);
    o["aoi_tail_1e4_ms"] = optional_json(s.aoi_tail_1e4_ms);
    o["prob_aoi_0ms"] = optional_json(s.prob_aoi_0ms);
    o["n_ipg"] = s.n_ipg;
    o["n_aoi"] = s.n_aoi;
    o["r"] = s.r;
    o["t"] = s.t;
    rows.push_back(std::move(o));
  }
  json aggs = json::array();
  for (const auto& a : table.aggregates) {
    json o = {{"sweep", a.sweep},     {"axis_field", a.axis_field}, {"axis_value", a.axis_value},
              {"variant", a.variant}, {"statistic", a.statistic}};
    for (std::size_t c = 0; c < kMetricColumns; ++c) o[kMetricNames[c]] = optional_json(a.values[c]);
    aggs.push_back(std::move(o));
  }
  return json{{"rows", rows}, {"aggregates", aggs}}.dump(2) + "\n";
}

std::vector<SweepRow> parse_rows_csv(std::string_view text) {
  std::vector<SweepRow> rows;
  for (const auto& f : body(text))
    rows.push_back({f[0], f[1], f[2], f[3], static_cast<int>(parse_count(f[4])), summary_from(f, 5)});
  return rows;
}

std::vector<AggregateRow> parse_aggregates_csv(std::string_view text) {
  std::vector<AggregateRow> rows;
  for (const auto& f : body(text)) {
    AggregateRow a{f[0], f[1], f[2], f[3], f[4], {}};
    for (std::size_t c = 0; c < kMetricColumns; ++c) a.values[c] = parse_optional(f[5 + c]);
    rows.push_back(std::move(a));
  }
  return rows;
}

SweepTable parse_table_json(std::string_view text) {
  SweepTable t;
  try {
    json doc = json::parse(text);
    for (const auto& o : doc.at("rows")) {
      SweepRow r{o.at("sweep"), o.at("axis_field"), o.at("axis_value"), o.at("variant"), o.at("replication"), {}};
      r.summary.pdr = json_optional(o.at("pdr"));
      r.summary.ipg_tail_1e5_ms = json_optional(o.at("ipg_tail_1e5_ms"));
      r.summary.ipg_tail_1e4_ms = json_optional(o.at("ipg_tail_1e4_ms"));
      r.summary.prob_ipg_100ms = json_optional(o.at("prob_ipg_100ms"));
      r.summary.aoi_tail_1e5_ms = json_optional(o.at("aoi_tail_1e5_ms"));
      r.summary.aoi_tail_1e4_ms = json_optional(o.at("aoi_tail_1e4_ms"));
      r.summary.prob_aoi_0ms = json_optional(o.at("prob_aoi_0ms"));
      r.summary.n_ipg = o.at("n_ipg");
      r.summary.n_aoi = o.at("n_aoi");
      r.summary.r = o.at("r");
      r.summary.t = o.at("t");
      t.rows.push_back(std::move(r));
    }
    for (const auto& o : doc.at("aggregates")) {
      AggregateRow a{o.at("sweep"), o.at("axis_field"), o.at("axis_value"), o.at("variant"), o.at("statistic"), {}};
      for (std::size_t c = 0; c < kMetricColumns; ++c) a.values[c] = json_optional(o.at(kMetricNames[c]));
      t.aggregates.push_back(std::move(a));
    }
  } catch (const json::exception& e) {
    throw IoError(std::string("json table: ") + e.what());
  }
  return t;
}

void write_file_atomic(const std::filesystem::path& destination, std::string_view content) {
  namespace fs = std::filesystem;
  fs::path tmp = destination;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + destination.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw IoError("write failed for '" + destination.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, destination, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw IoError("cannot rename into '" + destination.string() + "': " + ec.message());
  }
}

void emit_table(const SweepTable& table, TableFormat format, const std::filesystem::path& destination) {
  write_file_atomic(destination, format == TableFormat::csv ? rows_to_csv(table.rows) : table_to_json(table));
}

void emit_aggregates(const SweepTable& table, const std::filesystem::path& destination) {
  write_file_atomic(destination, aggregates_to_csv(table.aggregates));
}

}  // namespace cv2x
