#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "cv2x/channel.hpp"

namespace cv2x {

/// Integer-keyed sample counts. Keys are durations in whole periods.
/// Small keys, which carry almost all samples, live in a flat array.
class Histogram {
 public:
  void add(std::uint64_t value, std::uint64_t n = 1) {
    if (n == 0) return;
    if (value < kDense)
      dense_[value] += n;
    else
      sparse_[value] += n;
    total_ += n;
  }
  std::uint64_t count(std::uint64_t value) const;
  std::uint64_t total() const { return total_; }
  bool empty() const { return total_ == 0; }
  std::optional<std::uint64_t> max_value() const;

  /// Nonzero bins in ascending key order.
  std::map<std::uint64_t, std::uint64_t> bins() const;

  /// Calls f(value, count) for each nonzero bin, ascending.
  template <typename F>
  void for_each(F&& f) const {
    for (std::uint64_t v = 0; v < kDense; ++v)
      if (dense_[v]) f(v, dense_[v]);
    for (const auto& [v, n] : sparse_) f(v, n);
  }

  Histogram& merge(const Histogram& other);

  friend bool operator==(const Histogram&, const Histogram&) = default;

 private:
  static constexpr std::uint64_t kDense = 64;
  std::array<std::uint64_t, kDense> dense_{};
  std::map<std::uint64_t, std::uint64_t> sparse_;
  std::uint64_t total_ = 0;
};

/// Smallest observed value v with P(X > v) <= p, in periods. Absent for an
/// empty histogram; throws std::invalid_argument unless 0 < p < 1.
std::optional<std::uint64_t> ccdf_point(const Histogram& hist, double p);

/// ccdf_point converted to milliseconds.
std::optional<double> ccdf_value(const Histogram& hist, double p, double period_ms);

/// hist[value] / N, absent for an empty histogram.
std::optional<double> prob_at(const Histogram& hist, std::uint64_t value);

/// PDR, inter-packet gap and age-of-information accounting over all ordered
/// (transmitter, receiver) pairs.
///
/// The channel is fully connected and all-or-nothing per transmitter, so every
/// receiver of a given transmitter sees the same reception times. The store
/// therefore keeps one cursor per transmitter and weights each event by the
/// V-1 receivers. AoI samples are not stored one by one: each stretch between
/// receptions of length L yields the ages 1..L-1, so only the stretch lengths
/// are kept and the AoI histogram is rebuilt from their suffix counts.
class MetricsStore {
 public:
  /// Empty finalized store; the identity for merge().
  MetricsStore() = default;

  /// `measurement_start` is the first period that will be recorded. Every
  /// pair starts with its last generation time one period earlier, so that
  /// the AoI zero-bin counts receptions only.
  MetricsStore(int num_vehicles, std::int64_t measurement_start);

  /// Periods must be recorded in strictly increasing order starting at the
  /// measurement start.
  void record_report(const PeriodReport& report, std::int64_t period);

  /// Closes the open AoI stretch of every pair at `end_period` (one past the
  /// last recorded period) and drops the per-pair cursors.
  void finalize(std::int64_t end_period);
  bool finalized() const { return finalized_; }

  std::uint64_t rx_count() const { return rx_count_; }
  std::uint64_t attempt_count() const { return attempt_count_; }
  std::uint64_t pairs_with_reception() const { return pairs_with_reception_; }

  const Histogram& ipg_histogram() const { return ipg_; }

  /// AoI samples, one per pair per recorded period. Requires finalize().
  Histogram aoi_histogram() const;

  /// R / T, absent when no attempts were recorded.
  std::optional<double> pdr() const;

  /// Adds counters and histograms pointwise. Both stores must be finalized.
  MetricsStore& merge(const MetricsStore& other);

 private:
  int num_vehicles_ = 0;
  std::uint64_t receivers_ = 0;
  std::int64_t last_period_ = 0;
  bool finalized_ = true;

  std::uint64_t rx_count_ = 0;
  std::uint64_t attempt_count_ = 0;
  std::uint64_t pairs_with_reception_ = 0;
  Histogram ipg_;
  Histogram aoi_stretches_;

  std::vector<std::int64_t> last_gen_;
  std::vector<std::uint8_t> received_;
};

MetricsStore merge(MetricsStore a, const MetricsStore& b);

/// The summary record emitted for each run.
struct MetricsSummary {
  std::optional<double> pdr;
  std::optional<double> ipg_tail_1e5_ms;
  std::optional<double> ipg_tail_1e4_ms;
  std::optional<double> prob_ipg_100ms;  // probability of a one-period gap
  std::optional<double> aoi_tail_1e5_ms;
  std::optional<double> aoi_tail_1e4_ms;
  std::optional<double> prob_aoi_0ms;
  std::uint64_t n_ipg = 0;
  std::uint64_t n_aoi = 0;
  std::uint64_t r = 0;
  std::uint64_t t = 0;

  friend bool operator==(const MetricsSummary&, const MetricsSummary&) = default;
};

MetricsSummary summarize(const MetricsStore& store, double period_ms);

}  // namespace cv2x
