#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace cv2x {

/// Sliding window of per-resource usage bits over the last W periods.
///
/// Row t holds u_j(t) for every resource j. Rows are stored sparsely (the set
/// of resources with u_j = 1) and the per-resource column sums U_j are kept
/// incrementally, so recording a period costs O(|used|) rather than O(M).
class UsageLedger {
 public:
  UsageLedger(int num_resources, int window_periods);

  /// Appends one row with u_j = 1 iff j is listed. Evicts the oldest row once
  /// more than W rows are held. Duplicate indices are ignored; throws
  /// std::out_of_range for an index outside [0, M).
  void record_period(std::span<const int> used);

  /// U_j: number of retained rows in which j was used.
  int usage_total(int resource) const { return totals_.at(resource); }

  /// All U_j, indexed by resource.
  std::span<const int> usage_totals() const { return totals_; }

  /// S = { j : U_j > 0 }, ascending.
  std::vector<int> target_set() const;
  int target_set_size() const { return nonzero_; }

  /// u_j for the row `age` periods back (0 = most recent).
  bool used(int age, int resource) const;

  int rows() const { return filled_; }
  int window() const { return window_; }
  int num_resources() const { return static_cast<int>(totals_.size()); }

 private:
  int window_;
  std::vector<std::vector<int>> ring_;
  int head_ = 0;  // slot the next row is written to
  int filled_ = 0;
  std::vector<int> totals_;
  int nonzero_ = 0;
};

}  // namespace cv2x
