#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "cv2x/sweep.hpp"

namespace cv2x {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class TableFormat { csv, json };

TableFormat parse_table_format(std::string_view text);

/// CSV header, in column order.
std::string csv_header();

/// Per-replication rows as CSV. Absent values are empty fields; numbers use
/// the shortest text that parses back to the same double.
std::string rows_to_csv(const std::vector<SweepRow>& rows);

/// Aggregate rows as CSV; the replication column holds the statistic name.
std::string aggregates_to_csv(const std::vector<AggregateRow>& rows);

/// {"rows": [...], "aggregates": [...]}, absent values as null.
std::string table_to_json(const SweepTable& table);

std::vector<SweepRow> parse_rows_csv(std::string_view text);
std::vector<AggregateRow> parse_aggregates_csv(std::string_view text);
SweepTable parse_table_json(std::string_view text);

/// Writes the whole file or nothing: content goes to a sibling temp file
/// which is then renamed over `destination`. Throws IoError.
void write_file_atomic(const std::filesystem::path& destination, std::string_view content);

/// csv: per-replication rows only. json: rows and aggregates.
void emit_table(const SweepTable& table, TableFormat format, const std::filesystem::path& destination);

/// Aggregate rows as CSV.
void emit_aggregates(const SweepTable& table, const std::filesystem::path& destination);

}  // namespace cv2x
