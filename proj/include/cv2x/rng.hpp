#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace cv2x {

using Rng = std::mt19937_64;

/// Stream families. Each agent kind draws from its own seed space so that
/// adding attackers never perturbs target draws.
enum class StreamKind : std::uint64_t { target = 1, attacker = 2 };

/// Seed for one agent stream. A pure function of its arguments; the mixing is
/// splitmix64 finalization applied per component.
std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t replication_id, StreamKind kind,
                          std::uint64_t agent_id);

Rng make_stream(std::uint64_t master_seed, std::uint64_t replication_id, StreamKind kind,
                std::uint64_t agent_id);

/// One independent stream per target vehicle and per attacker.
struct RngStreams {
  std::uint64_t replication_id = 0;
  std::vector<Rng> targets;
  std::vector<Rng> attackers;
};

RngStreams derive_streams(std::uint64_t master_seed, std::uint64_t replication_id, int num_targets,
                          int num_attackers);

/// Uniform integer on the closed interval [lo, hi].
inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// Uniform real on [0, 1).
inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

}  // namespace cv2x
