#pragma once

#include "cv2x/config.hpp"
#include "cv2x/ledger.hpp"
#include "cv2x/rng.hpp"

namespace cv2x {

/// One smart jammer: the resource it is holding and how many more periods
/// it will hold it.
struct AttackerState {
  int attacker_id = 0;
  int attack_resource = 0;
  int hold_counter = 0;

  friend bool operator==(const AttackerState&, const AttackerState&) = default;
};

struct AttackOutcome {
  bool reselected = false;
  int target_set_size = 0;  // |S| seen at reselection, 0 otherwise
};

/// Uniform over the ledger's target set S, or over all M resources when S is
/// empty.
int pick_attack_resource(const UsageLedger& ledger, Rng& rng);

AttackerState init_attacker(int attacker_id, const UsageLedger& ledger, const IntRange& interval, Rng& rng);

/// Counts down the hold. On expiry the attacker always moves: a new resource
/// is drawn from S and the hold is redrawn from `interval`.
AttackOutcome attacker_advance(AttackerState& state, const UsageLedger& ledger, const IntRange& interval, Rng& rng);

}  // namespace cv2x
