#include "cv2x/metrics.hpp"

#include <stdexcept>

namespace cv2x {

std::uint64_t Histogram::count(std::uint64_t value) const {
  if (value < kDense) return dense_[value];
  auto it = sparse_.find(value);
  return it == sparse_.end() ? 0 : it->second;
}

std::optional<std::uint64_t> Histogram::max_value() const {
  if (!sparse_.empty()) return sparse_.rbegin()->first;
  for (std::uint64_t v = kDense; v-- > 0;)
    if (dense_[v]) return v;
  return std::nullopt;
}

std::map<std::uint64_t, std::uint64_t> Histogram::bins() const {
  std::map<std::uint64_t, std::uint64_t> out;
  for_each([&](std::uint64_t v, std::uint64_t n) { out.emplace_hint(out.end(), v, n); });
  return out;
}

Histogram& Histogram::merge(const Histogram& other) {
  other.for_each([&](std::uint64_t v, std::uint64_t n) { add(v, n); });
  return *this;
}

std::optional<std::uint64_t> ccdf_point(const Histogram& hist, double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("ccdf_point: p must lie in (0, 1)");
  if (hist.empty()) return std::nullopt;
  const auto n = static_cast<double>(hist.total());
  std::uint64_t at_or_below = 0;
  std::optional<std::uint64_t> found;
  hist.for_each([&](std::uint64_t v, std::uint64_t c) {
    if (found) return;
    at_or_below += c;
    if (static_cast<double>(hist.total() - at_or_below) / n <= p) found = v;
  });
  // the last bin always leaves zero samples above it
  return found;
}

std::optional<double> ccdf_value(const Histogram& hist, double p, double period_ms) {
  auto v = ccdf_point(hist, p);
  if (!v) return std::nullopt;
  return static_cast<double>(*v) * period_ms;
}

std::optional<double> prob_at(const Histogram& hist, std::uint64_t value) {
  if (hist.empty()) return std::nullopt;
  return static_cast<double>(hist.count(value)) / static_cast<double>(hist.total());
}

MetricsStore::MetricsStore(int num_vehicles, std::int64_t measurement_start)
    : num_vehicles_(num_vehicles),
      receivers_(num_vehicles > 0 ? static_cast<std::uint64_t>(num_vehicles - 1) : 0),
      last_period_(measurement_start - 1),
      finalized_(false),
      last_gen_(num_vehicles, measurement_start - 1),
      received_(num_vehicles, 0) {
  if (num_vehicles < 1) throw std::invalid_argument("MetricsStore: num_vehicles must be >= 1");
}

void MetricsStore::record_report(const PeriodReport& report, std::int64_t t) {
  if (finalized_) throw std::logic_error("MetricsStore: record after finalize");
  if (t <= last_period_) throw std::logic_error("MetricsStore: periods must increase");
  if (report.delivered.size() != static_cast<std::size_t>(num_vehicles_))
    throw std::invalid_argument("MetricsStore: report size does not match vehicle count");
  last_period_ = t;
  attempt_count_ += static_cast<std::uint64_t>(num_vehicles_) * receivers_;
  for (int a = 0; a < num_vehicles_; ++a) {
    if (!report.delivered[a]) continue;
    const auto gap = static_cast<std::uint64_t>(t - last_gen_[a]);
    rx_count_ += receivers_;
    if (received_[a]) {
      ipg_.add(gap, receivers_);
    } else {
      received_[a] = 1;
      pairs_with_reception_ += receivers_;
    }
    aoi_stretches_.add(gap, receivers_);
    last_gen_[a] = t;
  }
}

void MetricsStore::finalize(std::int64_t end_period) {
  if (finalized_) return;
  if (end_period <= last_period_) throw std::logic_error("MetricsStore: end precedes last recorded period");
  // The tail stretch after the last reception has no closing zero sample; a
  // stretch of length L contributes ages 1..L-1 either way.
  for (int a = 0; a < num_vehicles_; ++a) {
    const auto len = static_cast<std::uint64_t>(end_period - last_gen_[a]);
    if (len > 1) aoi_stretches_.add(len, receivers_);
  }
  last_gen_.clear();
  received_.clear();
  finalized_ = true;
}

Histogram MetricsStore::aoi_histogram() const {
  if (!finalized_) throw std::logic_error("MetricsStore: aoi_histogram before finalize");
  Histogram out;
  out.add(0, rx_count_);
  const auto bins = aoi_stretches_.bins();
  if (bins.empty()) return out;
  // ages k >= 1: number of stretches with length > k
  std::uint64_t longer = 0;
  auto it = bins.rbegin();
  for (std::uint64_t k = bins.rbegin()->first; k >= 1; --k) {
    while (it != bins.rend() && it->first > k) {
      longer += it->second;
      ++it;
    }
    if (longer == 0) continue;
    out.add(k, longer);
  }
  return out;
}

std::optional<double> MetricsStore::pdr() const {
  if (attempt_count_ == 0) return std::nullopt;
  return static_cast<double>(rx_count_) / static_cast<double>(attempt_count_);
}

MetricsStore& MetricsStore::merge(const MetricsStore& other) {
  if (!finalized_ || !other.finalized_) throw std::logic_error("MetricsStore: merge requires finalized stores");
  rx_count_ += other.rx_count_;
  attempt_count_ += other.attempt_count_;
  pairs_with_reception_ += other.pairs_with_reception_;
  ipg_.merge(other.ipg_);
  aoi_stretches_.merge(other.aoi_stretches_);
  return *this;
}

MetricsStore merge(MetricsStore a, const MetricsStore& b) {
  a.merge(b);
  return a;
}

MetricsSummary summarize(const MetricsStore& store, double period_ms) {
  MetricsSummary s;
  const Histogram aoi = store.aoi_histogram();
  const Histogram& ipg = store.ipg_histogram();
  s.pdr = store.pdr();
  s.ipg_tail_1e5_ms = ccdf_value(ipg, 1e-5, period_ms);
  s.ipg_tail_1e4_ms = ccdf_value(ipg, 1e-4, period_ms);
  s.prob_ipg_100ms = prob_at(ipg, 1);
  s.aoi_tail_1e5_ms = ccdf_value(aoi, 1e-5, period_ms);
  s.aoi_tail_1e4_ms = ccdf_value(aoi, 1e-4, period_ms);
  s.prob_aoi_0ms = prob_at(aoi, 0);
  s.n_ipg = ipg.total();
  s.n_aoi = aoi.total();
  s.r = store.rx_count();
  s.t = store.attempt_count();
  return s;
}

}  // namespace cv2x
