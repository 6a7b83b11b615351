#include "cv2x/ledger.hpp"

#include <algorithm>
#include <stdexcept>

namespace cv2x {

UsageLedger::UsageLedger(int num_resources, int window_periods)
    : window_(window_periods), ring_(window_periods), totals_(num_resources, 0) {
  if (num_resources < 1) throw std::invalid_argument("UsageLedger: num_resources must be >= 1");
  if (window_periods < 1) throw std::invalid_argument("UsageLedger: window must be >= 1");
}

void UsageLedger::record_period(std::span<const int> used) {
  const int m = num_resources();
  for (int j : used)
    if (j < 0 || j >= m) throw std::out_of_range("UsageLedger: resource index out of range");
  std::vector<int>& slot = ring_[head_];
  if (filled_ == window_) {
    for (int j : slot)
      if (--totals_[j] == 0) --nonzero_;
  } else {
    ++filled_;
  }
  slot.assign(used.begin(), used.end());
  if (!std::is_sorted(slot.begin(), slot.end())) std::sort(slot.begin(), slot.end());
  slot.erase(std::unique(slot.begin(), slot.end()), slot.end());
  for (int j : slot)
    if (totals_[j]++ == 0) ++nonzero_;
  head_ = (head_ + 1) % window_;
}

std::vector<int> UsageLedger::target_set() const {
  std::vector<int> s;
  s.reserve(nonzero_);
  for (int j = 0; j < num_resources(); ++j)
    if (totals_[j] > 0) s.push_back(j);
  return s;
}

bool UsageLedger::used(int age, int resource) const {
  if (age < 0 || age >= filled_) throw std::out_of_range("UsageLedger: row age out of range");
  int slot = ((head_ - 1 - age) % window_ + window_) % window_;
  const auto& row = ring_[slot];
  return std::binary_search(row.begin(), row.end(), resource);
}

}  // namespace cv2x
