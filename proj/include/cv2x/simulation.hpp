#pragma once

#include <cstdint>
#include <mutex>
#include <ostream>
#include <vector>

#include "cv2x/attacker.hpp"
#include "cv2x/channel.hpp"
#include "cv2x/config.hpp"
#include "cv2x/ledger.hpp"
#include "cv2x/metrics.hpp"
#include "cv2x/rng.hpp"
#include "cv2x/scheduler.hpp"

namespace cv2x {

/// Receives per-period agent state. Called after all counters have advanced,
/// so cs/co/hold_counter are the values going into the next period.
class TraceSink {
 public:
  virtual ~TraceSink() = default;
  virtual void vehicle(std::uint64_t replication, std::int64_t period, const VehicleState& state,
                       const TxDecision& decision) = 0;
  virtual void attacker(std::uint64_t replication, std::int64_t period, const AttackerState& state,
                        int target_set_size) = 0;
};

/// CSV trace lines:
///   vehicle,replication,period,vehicle_id,resource,is_oneshot,cs,co
///   attacker,replication,period,attacker_id,attack_resource,hold_counter,target_set_size
/// Thread-safe; lines from concurrent replications interleave whole.
class StreamTraceSink : public TraceSink {
 public:
  explicit StreamTraceSink(std::ostream& out) : out_(out) {}
  void vehicle(std::uint64_t replication, std::int64_t period, const VehicleState& state,
               const TxDecision& decision) override;
  void attacker(std::uint64_t replication, std::int64_t period, const AttackerState& state,
                int target_set_size) override;

 private:
  std::ostream& out_;
  std::mutex mutex_;
};

/// One replication of the slotted broadcast world. Each step runs, in order:
/// target decisions, attacker transmissions, collision resolution, metrics
/// (after warmup), ledger update, target counter advance, attacker advance.
/// Selection at period t therefore only sees ledger rows of periods < t.
class Replication {
 public:
  Replication(const ScenarioConfig& cfg, std::uint64_t replication_id, TraceSink* trace = nullptr);

  void step();
  void run();
  MetricsStore finish();

  std::int64_t period() const { return period_; }
  bool done() const { return period_ >= cfg_.sim_periods; }
  const std::vector<VehicleState>& vehicles() const { return vehicles_; }
  const std::vector<AttackerState>& attackers() const { return attackers_; }
  const UsageLedger& ledger() const { return ledger_; }
  const PeriodReport& last_report() const { return report_; }
  std::uint64_t attacker_expiries() const { return attacker_expiries_; }
  std::uint64_t attacker_reselections() const { return attacker_reselections_; }

  /// Visit agents in descending id order. Results must not change.
  void set_reverse_agent_order(bool reverse) { reverse_ = reverse; }

 private:
  template <typename F>
  void for_each_index(std::size_t n, F&& f) const {
    if (reverse_)
      for (std::size_t i = n; i-- > 0;) f(i);
    else
      for (std::size_t i = 0; i < n; ++i) f(i);
  }

  ScenarioConfig cfg_;
  SchedulerParams params_;
  std::uint64_t replication_id_;
  TraceSink* trace_;
  RngStreams streams_;
  UsageLedger ledger_;
  Channel channel_;
  MetricsStore metrics_;
  std::vector<VehicleState> vehicles_;
  std::vector<AttackerState> attackers_;
  std::vector<TxDecision> decisions_;
  std::vector<int> target_tx_;
  std::vector<int> attacker_tx_;
  PeriodReport report_;
  std::int64_t period_ = 0;
  std::uint64_t attacker_expiries_ = 0;
  std::uint64_t attacker_reselections_ = 0;
  bool reverse_ = false;
};

/// Runs all periods and returns the finalized store.
MetricsStore simulate_replication(const ScenarioConfig& cfg, std::uint64_t replication_id,
                                  TraceSink* trace = nullptr);

MetricsSummary run_replication(const ScenarioConfig& cfg, std::uint64_t replication_id, TraceSink* trace = nullptr);

}  // namespace cv2x
