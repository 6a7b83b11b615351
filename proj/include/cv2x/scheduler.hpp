#pragma once

#include <vector>

#include "cv2x/config.hpp"
#include "cv2x/ledger.hpp"
#include "cv2x/rng.hpp"

namespace cv2x {

/// Per-vehicle scheduling knobs, extracted once from a ScenarioConfig.
struct SchedulerParams {
  int num_resources = 100;
  IntRange sps_range{5, 15};
  bool oneshot_enabled = false;
  IntRange oneshot_range{2, 6};
  double reselect_prob = 0.2;
  SelectionPolicy policy = SelectionPolicy::sensing;
  SelectionPolicy oneshot_policy = SelectionPolicy::sensing;
  double candidate_min_fraction = 0.2;
  bool extra_co_decrement_on_keep = false;

  static SchedulerParams from(const ScenarioConfig& cfg);
};

/// Scheduling state of one target vehicle.
struct VehicleState {
  int vehicle_id = 0;
  int current_resource = 0;
  int cs = 0;  // SPS reselection counter
  int co = 0;  // one-shot counter, 0 when one-shot is disabled
  bool pending_oneshot = false;

  friend bool operator==(const VehicleState&, const VehicleState&) = default;
};

struct TxDecision {
  int resource = 0;
  bool is_oneshot = false;
};

/// Which counter expiry was resolved by advance_after_tx.
enum class Expiry {
  none,
  sps,      // C_s hit zero, C_o still running
  oneshot,  // C_o hit zero, C_s still running
  both,     // simultaneous expiry
};

struct AdvanceOutcome {
  Expiry expiry = Expiry::none;
  bool reselected = false;
};

/// Uniform draw on the closed interval. Throws ConfigError for an empty or
/// non-positive interval.
int draw_counter(const IntRange& range, Rng& rng);

/// Minimum candidate pool size, ceil(min_fraction * M).
int min_candidates(int num_resources, double min_fraction);

/// Resources not seen in use within the ledger window, minus `own_resource`
/// (pass -1 for none). When fewer than ceil(min_fraction * M) remain, the pool
/// is topped up with the lowest-U_j resources (ties by index). The own
/// resource is used for top-up only as a last resort. Result is ascending.
std::vector<int> sensing_candidates(const UsageLedger& ledger, int own_resource, double min_fraction);

/// Uniform over [0, M) or uniform over sensing_candidates(), by policy.
int select_resource(const UsageLedger& ledger, int own_resource, SelectionPolicy policy,
                    double min_fraction, Rng& rng);

/// Fresh state at simulation start: a selected resource and drawn counters.
VehicleState init_vehicle(int vehicle_id, const UsageLedger& ledger, const SchedulerParams& params, Rng& rng);

/// Chooses the resource for this period. A pending one-shot picks a fresh
/// resource for this transmission only, clears the flag and redraws C_o; the
/// persistent resource is left alone.
TxDecision tx_decision(VehicleState& state, const UsageLedger& ledger, const SchedulerParams& params, Rng& rng);

/// Per-transmission counter bookkeeping. Decrements C_s (and C_o), then
/// resolves at most one expiry case:
///   sps:     reselect with p_r and redraw both counters, else redraw C_s only
///   oneshot: mark the next transmission as a one-shot
///   both:    redraw both counters, reselect with p_r
AdvanceOutcome advance_after_tx(VehicleState& state, const UsageLedger& ledger, const SchedulerParams& params,
                                Rng& rng);

}  // namespace cv2x
