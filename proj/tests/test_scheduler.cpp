#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "cv2x/scheduler.hpp"

using namespace cv2x;

namespace {

SchedulerParams oneshot_params(double reselect_prob) {
  SchedulerParams p;
  p.num_resources = 20;
  p.sps_range = {7, 7};
  p.oneshot_enabled = true;
  p.oneshot_range = {4, 4};
  p.reselect_prob = reselect_prob;
  return p;
}

// Pearson chi-square statistic against equal expected counts.
double chi_square(const std::vector<long>& counts) {
  long n = 0;
  for (long c : counts) n += c;
  double expected = static_cast<double>(n) / counts.size();
  double x2 = 0;
  for (long c : counts) x2 += (c - expected) * (c - expected) / expected;
  return x2;
}

}  // namespace

TEST_CASE("candidate floor is ceil of the fraction") {
  CHECK(min_candidates(100, 0.2) == 20);
  CHECK(min_candidates(101, 0.2) == 21);
  CHECK(min_candidates(10, 0.2) == 2);
  CHECK(min_candidates(3, 0.2) == 1);
  CHECK(min_candidates(5, 1.0) == 5);
}

TEST_CASE("sensing candidates exclude recently used and own resources") {
  UsageLedger ledger(10, 10);
  std::vector<int> used = {1, 4};
  ledger.record_period(used);
  auto pool = sensing_candidates(ledger, 7, 0.2);
  CHECK(pool == std::vector<int>{0, 2, 3, 5, 6, 8, 9});
}

TEST_CASE("sensing candidates top up with the least used resources") {
  UsageLedger ledger(10, 10);
  // U = [3,3,3,3,3,3,3,3,2,1]
  for (int t = 0; t < 3; ++t) {
    std::vector<int> row;
    for (int j = 0; j < 8; ++j) row.push_back(j);
    if (t < 2) row.push_back(8);
    if (t < 1) row.push_back(9);
    ledger.record_period(row);
  }
  // floor is 4 of 10: {9, 8} then the lowest indices among the U=3 tie
  CHECK(sensing_candidates(ledger, -1, 0.4) == std::vector<int>{0, 1, 8, 9});
  // own resource goes last in the top-up order
  CHECK(sensing_candidates(ledger, 0, 0.4) == std::vector<int>{1, 2, 8, 9});
  // own resource is used when nothing else is left
  CHECK(sensing_candidates(ledger, 9, 1.0).size() == 10);
}

TEST_CASE("selection is uniform over the candidate pool") {
  UsageLedger ledger(10, 10);
  std::vector<int> used = {0, 1, 2, 3, 4};
  ledger.record_period(used);
  Rng rng = make_stream(11, 0, StreamKind::target, 0);
  std::vector<long> counts(10, 0);
  const int n = 50000;
  for (int i = 0; i < n; ++i) counts[select_resource(ledger, 9, SelectionPolicy::sensing, 0.2, rng)]++;
  for (int j : {0, 1, 2, 3, 4, 9}) CHECK(counts[j] == 0);
  std::vector<long> pool(counts.begin() + 5, counts.begin() + 9);
  // 3 degrees of freedom, 0.999 quantile 16.27
  CHECK(chi_square(pool) < 16.27);

  std::vector<long> all(10, 0);
  for (int i = 0; i < n; ++i) all[select_resource(ledger, 9, SelectionPolicy::uniform, 0.2, rng)]++;
  // 9 degrees of freedom, 0.999 quantile 27.88
  CHECK(chi_square(all) < 27.88);
}

TEST_CASE("counter draws are uniform on the closed interval") {
  Rng rng = make_stream(5, 0, StreamKind::target, 1);
  std::vector<long> counts(11, 0);
  for (int i = 0; i < 110000; ++i) {
    int c = draw_counter({5, 15}, rng);
    REQUIRE((c >= 5 && c <= 15));
    counts[c - 5]++;
  }
  // 10 degrees of freedom, 0.999 quantile 29.59
  CHECK(chi_square(counts) < 29.59);
  CHECK_THROWS_AS(draw_counter({0, 3}, rng), ConfigError);
  CHECK_THROWS_AS(draw_counter({4, 3}, rng), ConfigError);
}

TEST_CASE("case (a): SPS expiry with the one-shot counter still running") {
  UsageLedger ledger(20, 10);
  Rng rng = make_stream(1, 0, StreamKind::target, 0);

  SUBCASE("keep") {
    auto p = oneshot_params(0.0);
    VehicleState s{0, 3, 1, 3, false};
    auto out = advance_after_tx(s, ledger, p, rng);
    CHECK(out.expiry == Expiry::sps);
    CHECK_FALSE(out.reselected);
    CHECK(s.current_resource == 3);
    CHECK(s.cs == 7);
    CHECK(s.co == 2);  // one decrement only
    CHECK_FALSE(s.pending_oneshot);
  }
  SUBCASE("keep with the extra decrement switch") {
    auto p = oneshot_params(0.0);
    p.extra_co_decrement_on_keep = true;
    VehicleState s{0, 3, 1, 3, false};
    advance_after_tx(s, ledger, p, rng);
    CHECK(s.co == 1);
    CHECK_FALSE(s.pending_oneshot);
    VehicleState t{0, 3, 1, 2, false};
    advance_after_tx(t, ledger, p, rng);
    CHECK(t.co == 0);
    CHECK(t.pending_oneshot);
  }
  SUBCASE("reselect") {
    auto p = oneshot_params(1.0);
    VehicleState s{0, 3, 1, 3, false};
    auto out = advance_after_tx(s, ledger, p, rng);
    CHECK(out.expiry == Expiry::sps);
    CHECK(out.reselected);
    CHECK(s.current_resource != 3);
    CHECK(s.cs == 7);
    CHECK(s.co == 4);
    CHECK_FALSE(s.pending_oneshot);
  }
}

TEST_CASE("case (b): one-shot expiry triggers a single fresh transmission") {
  UsageLedger ledger(20, 10);
  Rng rng = make_stream(2, 0, StreamKind::target, 0);
  auto p = oneshot_params(1.0);
  VehicleState s{0, 3, 5, 1, false};
  auto out = advance_after_tx(s, ledger, p, rng);
  CHECK(out.expiry == Expiry::oneshot);
  CHECK_FALSE(out.reselected);
  CHECK(s.pending_oneshot);
  CHECK(s.cs == 4);
  CHECK(s.co == 0);
  CHECK(s.current_resource == 3);

  auto tx = tx_decision(s, ledger, p, rng);
  CHECK(tx.is_oneshot);
  CHECK(tx.resource != 3);
  CHECK_FALSE(s.pending_oneshot);
  CHECK(s.co == 4);
  CHECK(s.current_resource == 3);

  // persistent grant resumes on the next period
  advance_after_tx(s, ledger, p, rng);
  auto next = tx_decision(s, ledger, p, rng);
  CHECK_FALSE(next.is_oneshot);
  CHECK(next.resource == 3);
}

TEST_CASE("case (c): simultaneous expiry redraws both counters") {
  UsageLedger ledger(20, 10);
  Rng rng = make_stream(3, 0, StreamKind::target, 0);
  SUBCASE("keep") {
    auto p = oneshot_params(0.0);
    VehicleState s{0, 3, 1, 1, false};
    auto out = advance_after_tx(s, ledger, p, rng);
    CHECK(out.expiry == Expiry::both);
    CHECK_FALSE(out.reselected);
    CHECK(s.current_resource == 3);
    CHECK(s.cs == 7);
    CHECK(s.co == 4);
    CHECK_FALSE(s.pending_oneshot);
  }
  SUBCASE("reselect") {
    auto p = oneshot_params(1.0);
    VehicleState s{0, 3, 1, 1, false};
    auto out = advance_after_tx(s, ledger, p, rng);
    CHECK(out.expiry == Expiry::both);
    CHECK(out.reselected);
    CHECK(s.current_resource != 3);
    CHECK(s.cs == 7);
    CHECK(s.co == 4);
    CHECK_FALSE(s.pending_oneshot);
  }
}

TEST_CASE("no expiry only counts down") {
  UsageLedger ledger(20, 10);
  Rng rng = make_stream(4, 0, StreamKind::target, 0);
  auto p = oneshot_params(1.0);
  VehicleState s{0, 3, 5, 3, false};
  auto out = advance_after_tx(s, ledger, p, rng);
  CHECK(out.expiry == Expiry::none);
  CHECK(s == VehicleState{0, 3, 4, 2, false});
}

TEST_CASE("one-shot disabled: SPS expiry redraws C_s and never touches C_o") {
  UsageLedger ledger(20, 10);
  Rng rng = make_stream(5, 0, StreamKind::target, 0);
  auto p = oneshot_params(0.0);
  p.oneshot_enabled = false;
  VehicleState s = init_vehicle(0, ledger, p, rng);
  CHECK(s.co == 0);
  for (int i = 0; i < 100; ++i) {
    int before = s.current_resource;
    auto tx = tx_decision(s, ledger, p, rng);
    CHECK_FALSE(tx.is_oneshot);
    CHECK(tx.resource == before);
    advance_after_tx(s, ledger, p, rng);
    CHECK(s.current_resource == before);
    CHECK(s.co == 0);
  }
}

TEST_CASE("keep probability one means the resource never changes") {
  UsageLedger ledger(50, 10);
  Rng rng = make_stream(6, 0, StreamKind::target, 0);
  SchedulerParams p;
  p.num_resources = 50;
  p.reselect_prob = 0.0;
  VehicleState s = init_vehicle(0, ledger, p, rng);
  const int r0 = s.current_resource;
  for (int i = 0; i < 10000; ++i) {
    tx_decision(s, ledger, p, rng);
    advance_after_tx(s, ledger, p, rng);
    REQUIRE(s.current_resource == r0);
  }
}

TEST_CASE("reselection frequency matches p_r") {
  UsageLedger ledger(100, 10);
  Rng rng = make_stream(7, 0, StreamKind::target, 0);
  SchedulerParams p;
  p.sps_range = {1, 1};
  VehicleState s = init_vehicle(0, ledger, p, rng);
  int reselections = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) reselections += advance_after_tx(s, ledger, p, rng).reselected;
  // binomial sd is sqrt(n * 0.2 * 0.8) ~ 126
  CHECK(std::abs(reselections - 0.2 * n) < 5 * 126.5);
}

TEST_CASE("property: counter ranges and persistence hold over randomized steps") {
  Rng rng = make_stream(8, 0, StreamKind::target, 0);
  Rng world = make_stream(8, 0, StreamKind::attacker, 0);
  for (bool extra : {false, true}) {
    SchedulerParams p;
    p.num_resources = 30;
    p.oneshot_enabled = true;
    p.oneshot_range = {2, 6};
    p.extra_co_decrement_on_keep = extra;
    UsageLedger ledger(30, 10);
    VehicleState s = init_vehicle(0, ledger, p, rng);
    std::map<Expiry, int> seen;
    for (int step = 0; step < 100000; ++step) {
      const VehicleState before = s;
      auto tx = tx_decision(s, ledger, p, rng);
      REQUIRE(tx.is_oneshot == before.pending_oneshot);
      REQUIRE(s.current_resource == before.current_resource);
      REQUIRE((tx.resource >= 0 && tx.resource < 30));
      if (!tx.is_oneshot) REQUIRE(tx.resource == before.current_resource);
      if (tx.is_oneshot) {
        REQUIRE(tx.resource != before.current_resource);
        REQUIRE(p.oneshot_range.contains(s.co));
      }
      REQUIRE_FALSE(s.pending_oneshot);

      std::vector<int> busy;
      for (int k = 0; k < 5; ++k) busy.push_back(uniform_int(world, 0, 29));
      busy.push_back(tx.resource);
      ledger.record_period(busy);

      const VehicleState mid = s;
      auto out = advance_after_tx(s, ledger, p, rng);
      seen[out.expiry]++;
      REQUIRE((s.cs >= 1 && s.cs <= p.sps_range.hi));
      REQUIRE((s.co >= 0 && s.co <= p.oneshot_range.hi));
      if (s.co == 0) REQUIRE(s.pending_oneshot);
      if (s.pending_oneshot) REQUIRE(s.co == 0);
      // the resource can only move when C_s ran out
      if (s.current_resource != mid.current_resource) {
        REQUIRE(mid.cs == 1);
        REQUIRE(out.reselected);
      }
      if (out.expiry == Expiry::none) {
        REQUIRE(s.cs == mid.cs - 1);
        REQUIRE(s.co == mid.co - 1);
      }
      if (out.expiry == Expiry::sps || out.expiry == Expiry::both) REQUIRE(p.sps_range.contains(s.cs));
    }
    CHECK(seen[Expiry::none] > 0);
    CHECK(seen[Expiry::sps] > 0);
    CHECK(seen[Expiry::oneshot] > 0);
    CHECK(seen[Expiry::both] > 0);
  }
}

TEST_CASE("one-shot transmissions occur at the expected rate") {
  // With C_o uniform on [2,6] a one-shot happens every C_o + 1 periods on
  // average (the trigger period plus the transmission period), interrupted by
  // redraws on SPS expiry. Check against an independent counter simulation.
  UsageLedger ledger(100, 10);
  Rng rng = make_stream(9, 0, StreamKind::target, 0);
  SchedulerParams p;
  p.oneshot_enabled = true;
  VehicleState s = init_vehicle(0, ledger, p, rng);
  long oneshots = 0;
  const long n = 200000;
  for (long i = 0; i < n; ++i) {
    oneshots += tx_decision(s, ledger, p, rng).is_oneshot;
    advance_after_tx(s, ledger, p, rng);
  }

  Rng oracle_rng = make_stream(99, 0, StreamKind::target, 0);
  int cs = uniform_int(oracle_rng, 5, 15), co = uniform_int(oracle_rng, 2, 6);
  bool pending = false;
  long oracle = 0;
  for (long i = 0; i < n; ++i) {
    if (pending) {
      ++oracle;
      pending = false;
      co = uniform_int(oracle_rng, 2, 6);
    }
    --cs;
    --co;
    if (cs == 0 && co > 0) {
      if (uniform01(oracle_rng) < 0.2) co = uniform_int(oracle_rng, 2, 6);
      cs = uniform_int(oracle_rng, 5, 15);
    } else if (co == 0 && cs > 0) {
      pending = true;
    } else if (cs == 0 && co == 0) {
      cs = uniform_int(oracle_rng, 5, 15);
      co = uniform_int(oracle_rng, 2, 6);
    }
  }
  CHECK(std::abs(oneshots - oracle) < 0.02 * oracle);
}
