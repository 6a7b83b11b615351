#include "cv2x/channel.hpp"

#include <stdexcept>

namespace cv2x {

Channel::Channel(int num_resources) : target_count_(num_resources, 0), jammed_(num_resources, 0) {
  if (num_resources < 1) throw std::invalid_argument("Channel: num_resources must be >= 1");
}

void Channel::resolve(std::int64_t period, std::span<const int> target_tx, std::span<const int> attacker_tx,
                      PeriodReport& out) {
  const int m = num_resources();
  auto check = [m](int r) {
    if (r < 0 || r >= m) throw std::out_of_range("Channel: resource index out of range");
  };
  for (int r : target_tx) check(r);
  for (int r : attacker_tx) check(r);

  for (int r : target_tx) ++target_count_[r];
  for (int r : attacker_tx) jammed_[r] = 1;

  out.period = period;
  out.resource.assign(target_tx.begin(), target_tx.end());
  out.delivered.resize(target_tx.size());
  for (std::size_t v = 0; v < target_tx.size(); ++v) {
    const int r = target_tx[v];
    out.delivered[v] = target_count_[r] == 1 && !jammed_[r];
  }
  // One pass over the resources yields both sets in ascending order and
  // clears the scratch counts.
  out.decodable.clear();
  out.occupied.clear();
  for (int r = 0; r < m; ++r) {
    if (target_count_[r] > 0) {
      out.occupied.push_back(r);
      if (target_count_[r] == 1 && !jammed_[r]) out.decodable.push_back(r);
      target_count_[r] = 0;
    }
    jammed_[r] = 0;
  }
}

PeriodReport resolve_period(std::span<const int> target_tx, std::span<const int> attacker_tx, int num_resources,
                            std::int64_t period) {
  Channel ch(num_resources);
  PeriodReport report;
  ch.resolve(period, target_tx, attacker_tx, report);
  return report;
}

}  // namespace cv2x
