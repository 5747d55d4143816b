#include "rushsim/analysis.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <stdexcept>
#include <tuple>
#include <unordered_set>

namespace rushsim {

namespace {

std::uint64_t pair_key(NodeId receiver, NodeId source, std::uint32_t seq) {
  // receivers and sources fit in 16 bits at any realistic scale
  return (static_cast<std::uint64_t>(receiver) << 48) |
         (static_cast<std::uint64_t>(source & 0xffff) << 32) | seq;
}

bool contains_any(const std::vector<NodeId>& hops, std::span<const NodeId> set) {
  return std::any_of(hops.begin(), hops.end(), [&](NodeId h) {
    return std::find(set.begin(), set.end(), h) != set.end();
  });
}

}  // namespace

std::vector<DeliveryRecord> unique_deliveries(const RunTrace& trace) {
  std::unordered_set<std::uint64_t> seen;
  std::vector<const DeliveryRecord*> sorted;
  sorted.reserve(trace.deliveries.size());
  for (const auto& d : trace.deliveries) {
    sorted.push_back(&d);
  }
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto* a, const auto* b) { return a->arrival < b->arrival; });
  std::vector<DeliveryRecord> out;
  for (const auto* d : sorted) {
    if (seen.insert(pair_key(d->receiver, d->source, d->session_seq)).second) {
      out.push_back(*d);
    }
  }
  return out;
}

std::size_t completed_rounds(const RunTrace& trace) {
  return static_cast<std::size_t>(
      std::count_if(trace.rounds.begin(), trace.rounds.end(), [&](const RoundRecord& r) {
        return r.origin + trace.refresh_interval <= trace.duration;
      }));
}

AsrResult attack_success_rate(const RunTrace& trace) {
  AsrResult out;

  const std::size_t rounds = completed_rounds(trace);
  if (rounds > 0) {
    std::set<std::uint32_t> complete;
    for (const auto& r : trace.rounds) {
      if (r.origin + trace.refresh_interval <= trace.duration) {
        complete.insert(r.round);
      }
    }
    std::set<std::uint32_t> captured;
    for (const auto& g : trace.fg_grants) {
      if (complete.count(g.round) &&
          std::find(trace.attackers.begin(), trace.attackers.end(), g.node) !=
              trace.attackers.end()) {
        captured.insert(g.round);
      }
    }
    out.fg = {static_cast<double>(captured.size()) / static_cast<double>(rounds), true};
  }

  const auto unique = unique_deliveries(trace);
  if (!unique.empty()) {
    const auto hit = std::count_if(unique.begin(), unique.end(), [&](const DeliveryRecord& d) {
      return contains_any(d.hop_record, trace.attackers);
    });
    out.data = {static_cast<double>(hit) / static_cast<double>(unique.size()), true};
  }
  return out;
}

Ratio packet_delivery_ratio(const RunTrace& trace) {
  const double expected =
      static_cast<double>(trace.data.size()) * static_cast<double>(trace.receivers.size());
  if (expected == 0.0) {
    return {};
  }
  const auto acc = delivery_accounting(trace);
  return {static_cast<double>(acc.delivered_unique) / expected, true};
}

Ratio mean_end_to_end_delay(const RunTrace& trace) {
  const auto unique = unique_deliveries(trace);
  if (unique.empty()) {
    return {};
  }
  double sum = 0.0;
  for (const auto& d : unique) {
    sum += d.arrival - d.origin_time;
  }
  return {sum / static_cast<double>(unique.size()), true};
}

Accounting delivery_accounting(const RunTrace& trace) {
  Accounting acc;
  acc.expected = trace.data.size() * trace.receivers.size();

  std::unordered_set<std::uint64_t> delivered;
  for (const auto& d : trace.deliveries) {
    delivered.insert(pair_key(d.receiver, d.source, d.session_seq));
  }
  std::unordered_set<std::uint32_t> attacked;
  for (const auto& d : trace.attacker_drops) {
    if (d.source == trace.sender) {
      attacked.insert(d.session_seq);
    }
  }
  for (const auto& origin : trace.data) {
    for (NodeId r : trace.receivers) {
      if (delivered.count(pair_key(r, trace.sender, origin.session_seq))) {
        ++acc.delivered_unique;
      } else if (attacked.count(origin.session_seq)) {
        ++acc.lost_to_attacker;
      } else {
        ++acc.undelivered;
      }
    }
  }
  return acc;
}

RunMetrics compute_metrics(const RunTrace& trace) {
  RunMetrics m;
  const auto asr = attack_success_rate(trace);
  m.asr_fg = asr.fg;
  m.asr_data = asr.data;
  m.pdr = packet_delivery_ratio(trace);
  m.mean_delay = mean_end_to_end_delay(trace);
  m.drops_attacker = trace.attacker_drops.size();
  m.drops_duplicate = trace.duplicate_drops;
  m.drops_stale_reply = trace.stale_replies;
  m.accounting = delivery_accounting(trace);
  return m;
}

bool StaticGraph::connected() const {
  if (adjacency.empty()) {
    return true;
  }
  std::vector<bool> seen(adjacency.size(), false);
  std::vector<NodeId> stack{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    for (NodeId v : adjacency[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++count;
        stack.push_back(v);
      }
    }
  }
  return count == adjacency.size();
}

StaticGraph unit_disk_graph(std::span<const Position> positions, double range) {
  StaticGraph g;
  g.adjacency.resize(positions.size());
  const double r2 = range * range;
  for (NodeId u = 0; u < positions.size(); ++u) {
    for (NodeId v = 0; v < positions.size(); ++v) {
      if (u == v) {
        continue;
      }
      const double dx = positions[u].x - positions[v].x;
      const double dy = positions[u].y - positions[v].y;
      if (dx * dx + dy * dy <= r2) {
        g.adjacency[u].push_back(v);
      }
    }
  }
  return g;
}

std::vector<NodeId> OracleResult::chain(NodeId n) const {
  std::vector<NodeId> out;
  auto p = predecessor.at(n);
  while (p) {
    out.push_back(*p);
    p = predecessor.at(*p);
  }
  return out;
}

OracleResult earliest_arrival_oracle(const StaticGraph& graph, std::span<const SimTime> proc_delay,
                                     SimTime tx_delay, NodeId source) {
  const std::size_t n = graph.size();
  if (proc_delay.size() != n || source >= n) {
    throw std::invalid_argument("earliest_arrival_oracle: size mismatch");
  }
  // Tentative key: (arrival, settle rank of predecessor, node id).
  using Key = std::tuple<SimTime, std::size_t, NodeId>;
  constexpr std::size_t kNoRank = static_cast<std::size_t>(-1);

  OracleResult out;
  out.arrival.assign(n, std::nullopt);
  out.predecessor.assign(n, std::nullopt);
  std::vector<std::optional<Key>> best(n);
  std::vector<bool> settled(n, false);
  std::priority_queue<Key, std::vector<Key>, std::greater<>> open;

  best[source] = Key{0.0, kNoRank, source};
  open.push(*best[source]);
  std::size_t rank = 0;
  while (!open.empty()) {
    const Key k = open.top();
    open.pop();
    const NodeId u = std::get<2>(k);
    if (settled[u] || best[u] != k) {
      continue;
    }
    settled[u] = true;
    const std::size_t my_rank = rank++;
    out.arrival[u] = std::get<0>(k);
    const SimTime send = std::get<0>(k) + (u == source ? 0.0 : proc_delay[u]);
    const SimTime arrive = send + tx_delay;
    for (NodeId v : graph.adjacency[u]) {
      if (settled[v]) {
        continue;
      }
      const Key cand{arrive, my_rank, v};
      if (!best[v] || cand < *best[v]) {
        best[v] = cand;
        out.predecessor[v] = u;
        open.push(cand);
      }
    }
  }
  return out;
}

bool oracle_predicts_capture(const OracleResult& oracle, NodeId receiver,
                             std::span<const NodeId> attackers) {
  if (!oracle.reachable(receiver)) {
    return false;
  }
  return contains_any(oracle.chain(receiver), attackers);
}

}  // namespace rushsim
