#include "cv2x/simulation.hpp"

namespace cv2x {

void StreamTraceSink::vehicle(std::uint64_t replication, std::int64_t period, const VehicleState& s,
                              const TxDecision& d) {
  std::lock_guard lock(mutex_);
  out_ << "vehicle," << replication << ',' << period << ',' << s.vehicle_id << ',' << d.resource << ','
       << (d.is_oneshot ? 1 : 0) << ',' << s.cs << ',' << s.co << '\n';
}

void StreamTraceSink::attacker(std::uint64_t replication, std::int64_t period, const AttackerState& s,
                               int target_set_size) {
  std::lock_guard lock(mutex_);
  out_ << "attacker," << replication << ',' << period << ',' << s.attacker_id << ',' << s.attack_resource << ','
       << s.hold_counter << ',' << target_set_size << '\n';
}

namespace {

const ScenarioConfig& checked(const ScenarioConfig& cfg) {
  check_invariants(cfg);
  return cfg;
}

}  // namespace

Replication::Replication(const ScenarioConfig& cfg, std::uint64_t replication_id, TraceSink* trace)
    : cfg_(checked(cfg)),
      params_(SchedulerParams::from(cfg)),
      replication_id_(replication_id),
      trace_(trace),
      streams_(derive_streams(cfg.master_seed, replication_id, cfg.num_targets, cfg.num_attackers)),
      ledger_(cfg.num_resources, cfg.sensing_window_periods),
      channel_(cfg.num_resources),
      metrics_(cfg.num_targets, cfg.warmup_periods),
      decisions_(cfg.num_targets),
      target_tx_(cfg.num_targets),
      attacker_tx_(cfg.num_attackers) {
  vehicles_.reserve(cfg.num_targets);
  for (int v = 0; v < cfg.num_targets; ++v) vehicles_.push_back(init_vehicle(v, ledger_, params_, streams_.targets[v]));
  attackers_.reserve(cfg.num_attackers);
  for (int a = 0; a < cfg.num_attackers; ++a)
    attackers_.push_back(init_attacker(a, ledger_, cfg.attacker_interval, streams_.attackers[a]));
}

void Replication::step() {
  for_each_index(vehicles_.size(), [&](std::size_t v) {
    decisions_[v] = tx_decision(vehicles_[v], ledger_, params_, streams_.targets[v]);
    target_tx_[v] = decisions_[v].resource;
  });
  for (std::size_t a = 0; a < attackers_.size(); ++a) attacker_tx_[a] = attackers_[a].attack_resource;

  channel_.resolve(period_, target_tx_, attacker_tx_, report_);
  if (period_ >= cfg_.warmup_periods) metrics_.record_report(report_, period_);
  ledger_.record_period(cfg_.sense_any_energy ? report_.occupied : report_.decodable);

  for_each_index(vehicles_.size(), [&](std::size_t v) {
    advance_after_tx(vehicles_[v], ledger_, params_, streams_.targets[v]);
  });
  for_each_index(attackers_.size(), [&](std::size_t a) {
    attacker_expiries_ += attackers_[a].hold_counter <= 1;
    auto outcome = attacker_advance(attackers_[a], ledger_, cfg_.attacker_interval, streams_.attackers[a]);
    attacker_reselections_ += outcome.reselected;
  });

  if (trace_) {
    for (std::size_t v = 0; v < vehicles_.size(); ++v)
      trace_->vehicle(replication_id_, period_, vehicles_[v], decisions_[v]);
    for (std::size_t a = 0; a < attackers_.size(); ++a)
      trace_->attacker(replication_id_, period_, attackers_[a], ledger_.target_set_size());
  }
  ++period_;
}

void Replication::run() {
  while (!done()) step();
}

MetricsStore Replication::finish() {
  run();
  metrics_.finalize(period_);
  return metrics_;
}

MetricsStore simulate_replication(const ScenarioConfig& cfg, std::uint64_t replication_id, TraceSink* trace) {
  Replication rep(cfg, replication_id, trace);
  return rep.finish();
}

MetricsSummary run_replication(const ScenarioConfig& cfg, std::uint64_t replication_id, TraceSink* trace) {
  return summarize(simulate_replication(cfg, replication_id, trace), cfg.period_ms);
}

}  // namespace cv2x
