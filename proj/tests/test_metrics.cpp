#include <doctest.h>

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "cv2x/metrics.hpp"
#include "cv2x/rng.hpp"

using namespace cv2x;

namespace {

PeriodReport report_of(std::vector<std::uint8_t> delivered) {
  PeriodReport r;
  r.resource.assign(delivered.size(), 0);
  r.delivered = std::move(delivered);
  return r;
}

// Per ordered pair, per period bookkeeping with no shortcuts.
struct BruteForce {
  int v;
  std::int64_t start;
  std::vector<std::vector<std::int64_t>> last_gen;  // [tx][rx]
  std::vector<std::vector<std::int64_t>> last_rx;   // -1 until first reception
  std::uint64_t r = 0, t = 0;
  Histogram ipg, aoi;
  // per pair maxima for the IPG/AoI consistency check
  std::vector<std::vector<std::uint64_t>> max_gap, max_age_between;
  std::vector<std::vector<std::uint64_t>> open_max_age;

  BruteForce(int v_, std::int64_t start_)
      : v(v_),
        start(start_),
        last_gen(v_, std::vector<std::int64_t>(v_, start_ - 1)),
        last_rx(v_, std::vector<std::int64_t>(v_, -1)),
        max_gap(v_, std::vector<std::uint64_t>(v_, 0)),
        max_age_between(v_, std::vector<std::uint64_t>(v_, 0)),
        open_max_age(v_, std::vector<std::uint64_t>(v_, 0)) {}

  void record(const std::vector<std::uint8_t>& delivered, std::int64_t period) {
    for (int a = 0; a < v; ++a)
      for (int b = 0; b < v; ++b) {
        if (a == b) continue;
        ++t;
        if (delivered[a]) {
          ++r;
          if (last_rx[a][b] >= 0) {
            auto gap = static_cast<std::uint64_t>(period - last_rx[a][b]);
            ipg.add(gap);
            max_gap[a][b] = std::max(max_gap[a][b], gap);
            max_age_between[a][b] = std::max(max_age_between[a][b], open_max_age[a][b]);
          }
          last_rx[a][b] = period;
          last_gen[a][b] = period;
          open_max_age[a][b] = 0;
        }
        auto age = static_cast<std::uint64_t>(period - last_gen[a][b]);
        aoi.add(age);
        if (last_rx[a][b] >= 0) open_max_age[a][b] = std::max(open_max_age[a][b], age);
      }
  }
};

}  // namespace

TEST_CASE("histogram basics") {
  Histogram h;
  CHECK(h.empty());
  CHECK_FALSE(h.max_value());
  h.add(3);
  h.add(1, 4);
  h.add(7, 0);
  CHECK(h.total() == 5);
  CHECK(h.count(1) == 4);
  CHECK(h.count(7) == 0);
  CHECK(*h.max_value() == 3);
}

TEST_CASE("ccdf tail picks the smallest value meeting the threshold") {
  Histogram h;
  for (int x : {1, 1, 1, 2, 5}) h.add(x);
  CHECK(*ccdf_value(h, 0.4, 100.0) == 100.0);
  CHECK(*ccdf_value(h, 0.2, 100.0) == 200.0);
  CHECK(*ccdf_value(h, 0.1, 100.0) == 500.0);
  CHECK(*prob_at(h, 1) == doctest::Approx(0.6));
  CHECK(*prob_at(h, 4) == 0.0);

  Histogram empty;
  CHECK_FALSE(ccdf_point(empty, 1e-5));
  CHECK_FALSE(prob_at(empty, 1));
  CHECK_THROWS_AS(ccdf_point(h, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ccdf_point(h, 1.0), std::invalid_argument);
}

TEST_CASE("ccdf tail is monotone non-increasing in p") {
  Rng rng = make_stream(1, 0, StreamKind::target, 0);
  Histogram h;
  for (int i = 0; i < 10000; ++i) h.add(uniform_int(rng, 1, 50) * uniform_int(rng, 1, 3));
  std::uint64_t prev = ~0ULL;
  for (double p : {1e-5, 1e-4, 1e-3, 0.01, 0.05, 0.1, 0.3, 0.5, 0.9}) {
    auto v = *ccdf_point(h, p);
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("consecutive receptions give a one-period gap") {
  MetricsStore s(2, 0);
  s.record_report(report_of({1, 1}), 0);
  s.record_report(report_of({1, 1}), 1);
  s.finalize(2);
  CHECK(s.ipg_histogram().count(1) == 2);
  CHECK(s.ipg_histogram().total() == 2);
  CHECK(s.rx_count() == 4);
  CHECK(s.attempt_count() == 4);
  CHECK(*s.pdr() == 1.0);
}

TEST_CASE("gap of three periods gives the AoI sawtooth 0,1,2,0") {
  MetricsStore s(2, 0);
  s.record_report(report_of({1, 0}), 0);
  s.record_report(report_of({0, 0}), 1);
  s.record_report(report_of({0, 0}), 2);
  s.record_report(report_of({1, 0}), 3);
  s.finalize(4);
  CHECK(s.ipg_histogram().count(3) == 1);
  CHECK(s.ipg_histogram().total() == 1);
  // pair 0->1: 0,1,2,0; pair 1->0 never receives: 1,2,3,4
  Histogram expect;
  for (int a : {0, 1, 2, 0, 1, 2, 3, 4}) expect.add(a);
  CHECK(s.aoi_histogram() == expect);
}

TEST_CASE("undelivered periods count attempts only") {
  MetricsStore s(4, 0);
  s.record_report(report_of({0, 0, 0, 0}), 0);
  CHECK(s.attempt_count() == 12);
  CHECK(s.rx_count() == 0);
  s.finalize(1);
  CHECK(*s.pdr() == 0.0);
  CHECK(*prob_at(s.aoi_histogram(), 0) == 0.0);
}

TEST_CASE("no receivers means absent values") {
  MetricsStore s(1, 0);
  s.record_report(report_of({1}), 0);
  s.finalize(1);
  auto sum = summarize(s, 100.0);
  CHECK_FALSE(sum.pdr);
  CHECK_FALSE(sum.ipg_tail_1e5_ms);
  CHECK_FALSE(sum.prob_aoi_0ms);
  CHECK(sum.n_ipg == 0);
  CHECK(sum.n_aoi == 0);
  CHECK(sum.t == 0);
}

TEST_CASE("records must move forward and aoi needs finalize") {
  MetricsStore s(3, 5);
  CHECK_THROWS(s.record_report(report_of({1, 1, 1}), 4));
  s.record_report(report_of({1, 1, 1}), 5);
  CHECK_THROWS(s.record_report(report_of({1, 1, 1}), 5));
  CHECK_THROWS(s.aoi_histogram());
  MetricsStore other(3, 5);
  CHECK_THROWS(other.merge(s));
}

TEST_CASE("property: store matches per-pair brute force") {
  Rng rng = make_stream(7, 0, StreamKind::target, 0);
  for (int v : {2, 3, 6}) {
    for (double p : {0.05, 0.5, 0.95}) {
      const std::int64_t start = 10, end = 2000;
      MetricsStore store(v, start);
      BruteForce oracle(v, start);
      for (std::int64_t t = start; t < end; ++t) {
        std::vector<std::uint8_t> d(v);
        for (auto& x : d) x = uniform01(rng) < p;
        store.record_report(report_of(d), t);
        oracle.record(d, t);
      }
      store.finalize(end);
      CHECK(store.rx_count() == oracle.r);
      CHECK(store.attempt_count() == oracle.t);
      CHECK(store.ipg_histogram() == oracle.ipg);
      CHECK(store.aoi_histogram() == oracle.aoi);

      // invariants
      std::uint64_t pairs = 0;
      for (int a = 0; a < v; ++a)
        for (int b = 0; b < v; ++b) pairs += a != b && oracle.last_rx[a][b] >= 0;
      CHECK(store.pairs_with_reception() == pairs);
      CHECK(store.ipg_histogram().total() == store.rx_count() - pairs);
      CHECK(store.aoi_histogram().total() == store.attempt_count());
      CHECK(store.aoi_histogram().count(0) == store.rx_count());
      auto sum = summarize(store, 100.0);
      CHECK(*sum.prob_aoi_0ms == *sum.pdr);
      for (const auto& [k, n] : store.ipg_histogram().bins()) CHECK(k > 0);

      // max AoI between receptions = max IPG - 1, pair by pair
      for (int a = 0; a < v; ++a)
        for (int b = 0; b < v; ++b)
          if (a != b && oracle.max_gap[a][b] > 0) CHECK(oracle.max_age_between[a][b] == oracle.max_gap[a][b] - 1);
    }
  }
}

TEST_CASE("merge is pointwise addition with an identity") {
  Rng rng = make_stream(8, 0, StreamKind::target, 0);
  auto make = [&](std::int64_t start) {
    MetricsStore s(4, start);
    for (std::int64_t t = start; t < start + 300; ++t) {
      std::vector<std::uint8_t> d(4);
      for (auto& x : d) x = uniform01(rng) < 0.7;
      s.record_report(report_of(d), t);
    }
    s.finalize(start + 300);
    return s;
  };
  MetricsStore a = make(10), b = make(10), c = make(10);

  MetricsStore left = merge(merge(a, b), c);
  MetricsStore right = merge(a, merge(b, c));
  CHECK(summarize(left, 100.0) == summarize(right, 100.0));
  CHECK(left.aoi_histogram() == right.aoi_histogram());
  CHECK(left.rx_count() == a.rx_count() + b.rx_count() + c.rx_count());
  CHECK(left.attempt_count() == a.attempt_count() + b.attempt_count() + c.attempt_count());

  MetricsStore with_identity = merge(a, MetricsStore{});
  CHECK(summarize(with_identity, 100.0) == summarize(a, 100.0));
  CHECK(summarize(merge(MetricsStore{}, a), 100.0) == summarize(a, 100.0));
}
