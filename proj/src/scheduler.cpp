#include "cv2x/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cv2x {

SchedulerParams SchedulerParams::from(const ScenarioConfig& cfg) {
  SchedulerParams p;
  p.num_resources = cfg.num_resources;
  p.sps_range = cfg.sps_range;
  p.oneshot_enabled = cfg.oneshot_enabled;
  p.oneshot_range = cfg.oneshot_range;
  p.reselect_prob = cfg.reselect_prob();
  p.policy = cfg.selection_policy;
  p.oneshot_policy = cfg.oneshot_selection_policy;
  p.candidate_min_fraction = cfg.candidate_min_fraction;
  p.extra_co_decrement_on_keep = cfg.extra_co_decrement_on_keep;
  return p;
}

int draw_counter(const IntRange& range, Rng& rng) {
  if (range.lo <= 0 || range.lo > range.hi) throw ConfigError("counter range: invalid interval");
  return uniform_int(rng, range.lo, range.hi);
}

int min_candidates(int num_resources, double min_fraction) {
  // The epsilon keeps 0.2 * 100 from rounding up to 21.
  int need = static_cast<int>(std::ceil(min_fraction * num_resources - 1e-9));
  return std::clamp(need, 1, num_resources);
}

std::vector<int> sensing_candidates(const UsageLedger& ledger, int own_resource, double min_fraction) {
  const int m = ledger.num_resources();
  const auto totals = ledger.usage_totals();
  std::vector<int> pool;
  std::vector<int> rest;
  for (int j = 0; j < m; ++j) {
    if (j == own_resource) continue;
    (totals[j] == 0 ? pool : rest).push_back(j);
  }
  const auto need = static_cast<std::size_t>(min_candidates(m, min_fraction));
  if (pool.size() >= need) return pool;

  std::stable_sort(rest.begin(), rest.end(), [&](int a, int b) { return totals[a] < totals[b]; });
  if (own_resource >= 0 && own_resource < m) rest.push_back(own_resource);
  for (std::size_t i = 0; i < rest.size() && pool.size() < need; ++i) pool.push_back(rest[i]);
  std::sort(pool.begin(), pool.end());
  return pool;
}

int select_resource(const UsageLedger& ledger, int own_resource, SelectionPolicy policy, double min_fraction,
                    Rng& rng) {
  const int m = ledger.num_resources();
  if (policy == SelectionPolicy::uniform) return uniform_int(rng, 0, m - 1);

  // Fast path: enough idle resources, pick the k-th one without building the
  // candidate list. Same draw as indexing the ascending list.
  const auto totals = ledger.usage_totals();
  int idle = 0;
  for (int j = 0; j < m; ++j) idle += (totals[j] == 0 && j != own_resource);
  if (idle >= min_candidates(m, min_fraction)) {
    int k = uniform_int(rng, 0, idle - 1);
    for (int j = 0; j < m; ++j) {
      if (totals[j] != 0 || j == own_resource) continue;
      if (k-- == 0) return j;
    }
  }
  auto pool = sensing_candidates(ledger, own_resource, min_fraction);
  return pool[uniform_int(rng, 0, static_cast<int>(pool.size()) - 1)];
}

VehicleState init_vehicle(int vehicle_id, const UsageLedger& ledger, const SchedulerParams& params, Rng& rng) {
  VehicleState s;
  s.vehicle_id = vehicle_id;
  s.current_resource = select_resource(ledger, -1, params.policy, params.candidate_min_fraction, rng);
  s.cs = draw_counter(params.sps_range, rng);
  if (params.oneshot_enabled) s.co = draw_counter(params.oneshot_range, rng);
  return s;
}

TxDecision tx_decision(VehicleState& state, const UsageLedger& ledger, const SchedulerParams& params, Rng& rng) {
  if (!state.pending_oneshot) return {state.current_resource, false};
  int r = select_resource(ledger, state.current_resource, params.oneshot_policy, params.candidate_min_fraction, rng);
  state.pending_oneshot = false;
  state.co = draw_counter(params.oneshot_range, rng);
  return {r, true};
}

namespace {

bool reselect_draw(const SchedulerParams& params, Rng& rng) { return uniform01(rng) < params.reselect_prob; }

void reselect(VehicleState& state, const UsageLedger& ledger, const SchedulerParams& params, Rng& rng) {
  state.current_resource =
      select_resource(ledger, state.current_resource, params.policy, params.candidate_min_fraction, rng);
}

}  // namespace

AdvanceOutcome advance_after_tx(VehicleState& state, const UsageLedger& ledger, const SchedulerParams& params,
                                Rng& rng) {
  AdvanceOutcome out;
  state.cs = std::max(state.cs - 1, 0);
  if (!params.oneshot_enabled) {
    if (state.cs == 0) {
      out.expiry = Expiry::sps;
      out.reselected = reselect_draw(params, rng);
      if (out.reselected) reselect(state, ledger, params, rng);
      state.cs = draw_counter(params.sps_range, rng);
    }
    return out;
  }

  state.co = std::max(state.co - 1, 0);
  if (state.cs == 0 && state.co > 0) {
    out.expiry = Expiry::sps;
    out.reselected = reselect_draw(params, rng);
    if (out.reselected) {
      reselect(state, ledger, params, rng);
      state.cs = draw_counter(params.sps_range, rng);
      state.co = draw_counter(params.oneshot_range, rng);
    } else {
      state.cs = draw_counter(params.sps_range, rng);
      if (params.extra_co_decrement_on_keep && --state.co == 0) state.pending_oneshot = true;
    }
  } else if (state.co == 0 && state.cs > 0) {
    out.expiry = Expiry::oneshot;
    state.pending_oneshot = true;
  } else if (state.cs == 0 && state.co == 0) {
    out.expiry = Expiry::both;
    state.cs = draw_counter(params.sps_range, rng);
    state.co = draw_counter(params.oneshot_range, rng);
    out.reselected = reselect_draw(params, rng);
    if (out.reselected) reselect(state, ledger, params, rng);
  }
  return out;
}

}  // namespace cv2x
