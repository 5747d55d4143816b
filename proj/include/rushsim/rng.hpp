#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace rushsim {

/// Concerns that get their own random stream. Streams are further split by a
/// sub-id (usually a node id) so that one node's draws never shift another's.
enum class Stream : std::uint32_t {
  Layout = 1,     // initial node positions
  Mobility = 2,   // waypoint destinations
  Jitter = 3,     // legitimate forwarding delay, control packets
  Placement = 4,  // attacker placement
  Traffic = 5,
  Attack = 6,     // attacker-side decisions (blackhole drops)
  DataJitter = 7,  // legitimate forwarding delay, data packets
};

/// Seeded pseudo-random source. Draws depend only on (seed, stream, sub-id)
/// and the draw index; no implementation-defined std distributions are used,
/// so sequences are reproducible across standard libraries.
class RngStream {
 public:
  RngStream(std::uint64_t seed, Stream stream, std::uint64_t sub_id = 0);

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform01();

  /// Uniform in [lo, hi). lo == hi yields lo. Throws on lo > hi.
  double uniform(double lo, double hi);

  /// Uniform integer in [0, n). Throws on n == 0.
  std::size_t index(std::size_t n);

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace rushsim
