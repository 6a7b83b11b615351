#include "cv2x/rng.hpp"

namespace cv2x {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t replication_id, StreamKind kind,
                          std::uint64_t agent_id) {
  std::uint64_t h = splitmix64(master_seed);
  h = splitmix64(h ^ replication_id);
  h = splitmix64(h ^ static_cast<std::uint64_t>(kind));
  return splitmix64(h ^ agent_id);
}

Rng make_stream(std::uint64_t master_seed, std::uint64_t replication_id, StreamKind kind,
                std::uint64_t agent_id) {
  std::uint64_t s = stream_seed(master_seed, replication_id, kind, agent_id);
  std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32)};
  return Rng(seq);
}

RngStreams derive_streams(std::uint64_t master_seed, std::uint64_t replication_id, int num_targets,
                          int num_attackers) {
  RngStreams out;
  out.replication_id = replication_id;
  out.targets.reserve(num_targets);
  for (int i = 0; i < num_targets; ++i)
    out.targets.push_back(make_stream(master_seed, replication_id, StreamKind::target, i));
  out.attackers.reserve(num_attackers);
  for (int i = 0; i < num_attackers; ++i)
    out.attackers.push_back(make_stream(master_seed, replication_id, StreamKind::attacker, i));
  return out;
}

}  // namespace cv2x
