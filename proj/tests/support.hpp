#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "rushsim/analysis.hpp"
#include "rushsim/scenario.hpp"

namespace rushsim::testing {

/// Stationary scenario on explicit positions with default radio (250 m,
/// 2 Mbps, 5-15 ms jitter).
inline Scenario static_scenario(std::vector<Position> positions, NodeId sender,
                                std::vector<NodeId> receivers, SimTime duration = 20.0,
                                std::uint64_t seed = 1) {
  Scenario s;
  double w = 1.0;
  double h = 1.0;
  for (const auto& p : positions) {
    w = std::max(w, p.x);
    h = std::max(h, p.y);
  }
  s.area = {w, h};
  s.positions = std::move(positions);
  s.speed = 0.0;
  s.members.sender = sender;
  s.members.receivers = std::move(receivers);
  s.duration = duration;
  s.seed = seed;
  return s;
}

inline AttackerSpec rusher(NodeId node, SimTime rush_delay = 0.0005) {
  return {node, AttackProfile{Rushing{rush_delay}, Placement::Uniform, RushScope::All}};
}

/// S(0) - X - ... evenly spaced 200 m apart on a line; only adjacent nodes hear
/// each other.
inline std::vector<Position> line(std::size_t n, double spacing = 200.0) {
  std::vector<Position> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({static_cast<double>(i) * spacing, 0.0});
  }
  return out;
}

// Diamond S -> {A, B} -> M -> R. Ids: S=0, R=1, A=2, B=3, M=4.
// S-A, S-B, A-B, A-M, B-M, M-R in range; nothing else.
inline constexpr NodeId kDiamondS = 0;
inline constexpr NodeId kDiamondR = 1;
inline constexpr NodeId kDiamondA = 2;
inline constexpr NodeId kDiamondB = 3;
inline constexpr NodeId kDiamondM = 4;

inline std::vector<Position> diamond() {
  return {{0.0, 200.0}, {600.0, 200.0}, {200.0, 320.0}, {200.0, 80.0}, {400.0, 200.0}};
}

/// One random static graph race: 20 nodes in 500x500, connected, sender 0,
/// receivers 1-5, a rushing attacker at node 6, every legitimate node at a
/// fixed 10 ms processing delay.
struct OracleCase {
  std::uint64_t seed = 0;
  bool upstream_match = true;
  bool capture_match = true;
  bool predicted_capture = false;
};

inline OracleCase run_oracle_case(std::uint64_t seed, SimTime rush_delay = 0.0005) {
  constexpr std::size_t kNodes = 20;
  const Area area{500.0, 500.0};
  std::vector<Position> pos;
  for (;; ++seed) {
    pos = init_world(area, kNodes, seed);
    if (unit_disk_graph(pos, 250.0).connected()) break;
  }
  Scenario s = static_scenario(pos, 0, {1, 2, 3, 4, 5}, 3.0, seed);
  s.area = area;
  s.radio.proc_delay_lo = s.radio.proc_delay_hi = 0.010;
  s.attackers = {rusher(6, rush_delay)};

  std::vector<SimTime> proc(kNodes, 0.010);
  proc[6] = rush_delay;
  const auto graph = unit_disk_graph(pos, s.radio.range);
  const auto oracle = earliest_arrival_oracle(graph, proc, s.radio.tx_delay(s.radio.ctrl_packet_bits), 0);

  Simulation sim(s);
  const RunTrace& t = sim.run();

  OracleCase out;
  out.seed = seed;
  const auto key = round_key(0, 0);
  for (NodeId n = 1; n < kNodes; ++n) {
    const auto& up = sim.network().state(n).upstream;
    const auto it = up.find(key);
    const std::optional<NodeId> got =
        it == up.end() ? std::nullopt : std::optional<NodeId>(it->second);
    out.upstream_match &= got == oracle.predecessor[n];
  }
  const std::vector<NodeId> attackers{6};
  for (NodeId r : s.members.receivers) {
    out.predicted_capture |= oracle_predicts_capture(oracle, r, attackers);
  }
  const bool simulated_capture =
      std::any_of(t.fg_grants.begin(), t.fg_grants.end(),
                  [](const FgGrant& g) { return g.node == 6 && g.round == 0; });
  out.capture_match = simulated_capture == out.predicted_capture;
  return out;
}

// Mean per-packet delay increase over packets both runs delivered.
inline double paired_delay_increase(const RunTrace& attacked, const RunTrace& clean) {
  std::map<std::pair<NodeId, std::uint32_t>, SimTime> base;
  for (const auto& d : unique_deliveries(clean)) {
    base[{d.receiver, d.session_seq}] = d.arrival - d.origin_time;
  }
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& d : unique_deliveries(attacked)) {
    if (auto it = base.find({d.receiver, d.session_seq}); it != base.end()) {
      sum += (d.arrival - d.origin_time) - it->second;
      ++n;
    }
  }
  return n ? sum / static_cast<double>(n) : 0.0;
}

}  // namespace rushsim::testing
