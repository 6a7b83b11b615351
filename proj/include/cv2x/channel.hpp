#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace cv2x {

/// Outcome of one transmission period on the fully connected channel.
struct PeriodReport {
  std::int64_t period = 0;
  std::vector<int> resource;            // per target vehicle
  std::vector<std::uint8_t> delivered;  // per target vehicle
  std::vector<int> decodable;           // one target, no attacker; ascending
  std::vector<int> occupied;            // at least one target; ascending
};

/// Collision resolution with reusable scratch buffers. A target is delivered
/// iff it is the only transmitter, target or attacker, on its resource. There
/// is no capture and no fading.
class Channel {
 public:
  explicit Channel(int num_resources);

  /// Indices in both spans must lie in [0, M); throws std::out_of_range.
  void resolve(std::int64_t period, std::span<const int> target_tx, std::span<const int> attacker_tx,
               PeriodReport& out);

  int num_resources() const { return static_cast<int>(target_count_.size()); }

 private:
  std::vector<int> target_count_;
  std::vector<std::uint8_t> jammed_;
};

PeriodReport resolve_period(std::span<const int> target_tx, std::span<const int> attacker_tx, int num_resources,
                            std::int64_t period = 0);

}  // namespace cv2x
