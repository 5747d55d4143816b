#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rushsim/trace.hpp"

namespace rushsim {

/// A ratio or mean that may be undefined (empty denominator). Undefined
/// values carry 0.0.
struct Ratio {
  double value = 0.0;
  bool defined = false;
};

struct AsrResult {
  Ratio fg;    // completed rounds with an attacker in the forwarding group
  Ratio data;  // unique deliveries whose hop record contains an attacker
};

/// Per (receiver, data packet) outcome. Every pair lands in exactly one bin.
struct Accounting {
  std::uint64_t expected = 0;  // originated x receivers
  std::uint64_t delivered_unique = 0;
  std::uint64_t lost_to_attacker = 0;
  std::uint64_t undelivered = 0;  // in flight at the horizon, or lost to mobility

  bool balanced() const {
    return expected == delivered_unique + lost_to_attacker + undelivered;
  }
};

struct RunMetrics {
  Ratio asr_fg;
  Ratio asr_data;
  Ratio pdr;
  Ratio mean_delay;
  std::uint64_t drops_attacker = 0;
  std::uint64_t drops_duplicate = 0;
  std::uint64_t drops_stale_reply = 0;
  Accounting accounting;
};

/// First copy per (receiver, source, session seq), in trace order.
std::vector<DeliveryRecord> unique_deliveries(const RunTrace& trace);

/// Rounds whose refresh interval ended within the horizon.
std::size_t completed_rounds(const RunTrace& trace);

AsrResult attack_success_rate(const RunTrace& trace);
Ratio packet_delivery_ratio(const RunTrace& trace);
Ratio mean_end_to_end_delay(const RunTrace& trace);
Accounting delivery_accounting(const RunTrace& trace);
RunMetrics compute_metrics(const RunTrace& trace);

/// Undirected static connectivity, adjacency lists ascending by id.
struct StaticGraph {
  std::vector<std::vector<NodeId>> adjacency;

  std::size_t size() const { return adjacency.size(); }
  bool connected() const;
};

StaticGraph unit_disk_graph(std::span<const Position> positions, double range);

struct OracleResult {
  std::vector<std::optional<SimTime>> arrival;
  std::vector<std::optional<NodeId>> predecessor;

  bool reachable(NodeId n) const { return arrival.at(n).has_value(); }
  /// Predecessor chain from `n` back to the source, excluding `n`.
  std::vector<NodeId> chain(NodeId n) const;
};

/// Flood race on a static graph with fixed per-node forwarding delays. A node
/// first hears the flood at min over neighbors u of
/// (arrival(u) + proc_delay(u)) + tx_delay; the source sends at t=0 with no
/// processing delay. Exact ties go to the predecessor that heard the flood
/// first, then to the lower node id, which mirrors the simulator's
/// insertion-order tie-break.
OracleResult earliest_arrival_oracle(const StaticGraph& graph, std::span<const SimTime> proc_delay,
                                     SimTime tx_delay, NodeId source);

/// True when an attacker sits on the receiver's predecessor chain.
bool oracle_predicts_capture(const OracleResult& oracle, NodeId receiver,
                             std::span<const NodeId> attackers);

}  // namespace rushsim
