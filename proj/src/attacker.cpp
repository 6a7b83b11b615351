#include "cv2x/attacker.hpp"

#include <algorithm>

#include "cv2x/scheduler.hpp"

namespace cv2x {

int pick_attack_resource(const UsageLedger& ledger, Rng& rng) {
  const int m = ledger.num_resources();
  const int size = ledger.target_set_size();
  if (size == 0) return uniform_int(rng, 0, m - 1);
  int k = uniform_int(rng, 0, size - 1);
  const auto totals = ledger.usage_totals();
  for (int j = 0; j < m; ++j) {
    if (totals[j] > 0 && k-- == 0) return j;
  }
  return m - 1;  // unreachable: target_set_size counts the nonzero totals
}

AttackerState init_attacker(int attacker_id, const UsageLedger& ledger, const IntRange& interval, Rng& rng) {
  AttackerState s;
  s.attacker_id = attacker_id;
  s.attack_resource = pick_attack_resource(ledger, rng);
  s.hold_counter = draw_counter(interval, rng);
  return s;
}

AttackOutcome attacker_advance(AttackerState& state, const UsageLedger& ledger, const IntRange& interval, Rng& rng) {
  state.hold_counter = std::max(state.hold_counter - 1, 0);
  if (state.hold_counter > 0) return {};
  AttackOutcome out{true, ledger.target_set_size()};
  state.attack_resource = pick_attack_resource(ledger, rng);
  state.hold_counter = draw_counter(interval, rng);
  return out;
}

}  // namespace cv2x
