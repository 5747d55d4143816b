#include "rushsim/protocol.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace rushsim {

void ProtocolParams::validate() const {
  if (!(refresh_interval > 0.0)) {
    throw std::invalid_argument("refresh_interval must be > 0");
  }
  if (!(fg_lifetime > 0.0)) {
    throw std::invalid_argument("fg_lifetime must be > 0");
  }
  if (!(data_rate > 0.0) || !std::isfinite(data_rate)) {
    throw std::invalid_argument("data_rate must be > 0");
  }
  if (!(data_start >= 0.0)) {
    throw std::invalid_argument("data_start must be >= 0");
  }
}

MulticastNetwork::MulticastNetwork(World& world, NetScheduler& scheduler, Membership members,
                                   ProtocolParams params, std::uint64_t seed, RunTrace& trace)
    : world_(world),
      sched_(scheduler),
      members_(std::move(members)),
      params_(params),
      trace_(trace),
      nodes_(world.size()),
      receiver_flag_(world.size(), false),
      behaviors_(world.size()) {
  params_.validate();
  if (members_.sender >= world.size()) {
    throw std::invalid_argument("sender id out of range");
  }
  for (NodeId r : members_.receivers) {
    if (r >= world.size() || r == members_.sender) {
      throw std::invalid_argument("invalid receiver id " + std::to_string(r));
    }
    receiver_flag_[r] = true;
  }
  jitter_.reserve(world.size());
  data_jitter_.reserve(world.size());
  for (std::size_t i = 0; i < world.size(); ++i) {
    jitter_.emplace_back(seed, Stream::Jitter, i);
    data_jitter_.emplace_back(seed, Stream::DataJitter, i);
  }
  trace_.sender = members_.sender;
  trace_.receivers = members_.receivers;
  trace_.refresh_interval = params_.refresh_interval;
}

void MulticastNetwork::set_behavior(NodeId node, std::unique_ptr<RelayBehavior> behavior) {
  behaviors_.at(node) = std::move(behavior);
}

void MulticastNetwork::start(SimTime duration) {
  duration_ = duration;
  trace_.duration = duration;
  if (0.0 < duration) {
    sched_.schedule(0.0, OriginateQuery{members_.sender, 0});
  }
  if (params_.data_start < duration) {
    sched_.schedule(params_.data_start, OriginateData{members_.sender, 0});
  }
  for (NodeId n = 0; n < world_.size(); ++n) {
    if (auto due = world_.waypoint_due(n); due && *due <= duration) {
      sched_.schedule(*due, WaypointArrival{n});
    }
  }
  sched_.schedule(duration, SimEnd{});
}

SimTime MulticastNetwork::draw_jitter(NodeId node, PacketKind kind) {
  const auto& radio = world_.radio();
  auto& rng = kind == PacketKind::Data ? data_jitter_[node] : jitter_[node];
  return rng.uniform(radio.proc_delay_lo, radio.proc_delay_hi);
}

RelayDecision MulticastNetwork::decide(NodeId node, PacketKind kind) {
  const SimTime legit = draw_jitter(node, kind);
  if (auto& b = behaviors_[node]) {
    return b->relay(kind, legit);
  }
  return RelayDecision{true, legit, true};
}

void MulticastNetwork::transmit(NodeId from, SimTime at, SimTime delay, Packet packet) {
  const PacketKind kind = kind_of(packet);
  const int bits = kind == PacketKind::Data ? world_.radio().data_packet_bits
                                            : world_.radio().ctrl_packet_bits;
  auto shared = std::make_shared<const Packet>(std::move(packet));
  const auto arrivals = world_.broadcast(from, at, delay, bits);
  for (const auto& a : arrivals) {
    sched_.schedule(a.at, PacketArrival{a.to, from, shared});
  }
  NodeId source = 0;
  std::uint32_t seq = 0;
  std::visit(
      [&](const auto& p) {
        source = p.source;
        if constexpr (std::is_same_v<std::decay_t<decltype(p)>, DataPacket>) {
          seq = p.session_seq;
        } else {
          seq = p.seq;
        }
      },
      *shared);
  trace_.transmissions.push_back(
      {at + delay, from, kind, source, seq, static_cast<std::uint32_t>(arrivals.size())});
}

void MulticastNetwork::handle(const NetEvent& ev) {
  ++trace_.processed_events;
  if (event_log_) {
    *event_log_ << format_event(ev) << '\n';
  }
  const SimTime at = ev.fire_at;
  std::visit(
      [&](const auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, PacketArrival>) {
          std::visit(
              [&](const auto& pkt) {
                using P = std::decay_t<decltype(pkt)>;
                if constexpr (std::is_same_v<P, JoinQuery>) {
                  handle_query(e.to, pkt, at);
                } else if constexpr (std::is_same_v<P, JoinReply>) {
                  handle_reply(e.to, pkt, at);
                } else {
                  forward_data(e.to, pkt, at);
                }
              },
              *e.packet);
        } else if constexpr (std::is_same_v<T, WaypointArrival>) {
          world_.advance_leg(e.node);
          if (auto due = world_.waypoint_due(e.node); due && *due <= duration_) {
            sched_.schedule(*due, WaypointArrival{e.node});
          }
        } else if constexpr (std::is_same_v<T, OriginateQuery>) {
          originate_query(e.sender, e.round, at);
        } else if constexpr (std::is_same_v<T, OriginateData>) {
          originate_data(e.sender, e.session_seq, at);
        }
      },
      ev.payload);
}

void MulticastNetwork::originate_query(NodeId sender, std::uint32_t round, SimTime at) {
  if (sender != members_.sender) {
    throw std::logic_error("originate_query: node is not the multicast source");
  }
  nodes_[sender].query_cache.insert(round_key(sender, round));
  trace_.rounds.push_back({round, at});
  transmit(sender, at, 0.0, JoinQuery{sender, round, sender, {sender}});

  const SimTime next = static_cast<double>(round + 1) * params_.refresh_interval;
  if (next < duration_) {
    sched_.schedule(next, OriginateQuery{sender, round + 1});
  }
}

void MulticastNetwork::handle_query(NodeId node, const JoinQuery& pkt, SimTime at) {
  auto& st = nodes_[node];
  const auto key = round_key(pkt.source, pkt.seq);
  if (!st.query_cache.insert(key).second) {
    ++trace_.duplicate_drops;
    return;
  }
  st.upstream[key] = pkt.prev_hop;

  const RelayDecision d = decide(node, PacketKind::Query);
  if (d.forward) {
    JoinQuery out{pkt.source, pkt.seq, pkt.prev_hop, pkt.hop_record};
    if (d.record_self) {
      out.prev_hop = node;
      out.hop_record.push_back(node);
    }
    transmit(node, at, d.delay, std::move(out));
  }

  if (receiver_flag_[node]) {
    const SimTime delay = draw_jitter(node, PacketKind::Reply);
    transmit(node, at, delay, JoinReply{pkt.source, pkt.seq, node, pkt.prev_hop, {node}});
  }
}

void MulticastNetwork::handle_reply(NodeId node, const JoinReply& pkt, SimTime at) {
  if (pkt.next_hop != node) {
    return;
  }
  auto& st = nodes_[node];
  st.fg_expiry = at + params_.fg_lifetime;
  trace_.fg_grants.push_back({at, node, pkt.seq, pkt.receiver});
  if (node == pkt.source) {
    return;
  }
  const auto it = st.upstream.find(round_key(pkt.source, pkt.seq));
  if (it == st.upstream.end()) {
    ++trace_.stale_replies;
    return;
  }
  const RelayDecision d = decide(node, PacketKind::Reply);
  if (!d.forward) {
    return;
  }
  JoinReply out{pkt.source, pkt.seq, pkt.receiver, it->second, pkt.hop_record};
  if (d.record_self) {
    out.hop_record.push_back(node);
  }
  transmit(node, at, d.delay, std::move(out));
}

void MulticastNetwork::originate_data(NodeId sender, std::uint32_t session_seq, SimTime at) {
  if (sender != members_.sender) {
    throw std::logic_error("originate_data: node is not the multicast source");
  }
  nodes_[sender].data_cache.insert(round_key(sender, session_seq));
  trace_.data.push_back({session_seq, at});
  transmit(sender, at, 0.0, DataPacket{sender, session_seq, at, {sender}});

  const SimTime next =
      params_.data_start + static_cast<double>(session_seq + 1) / params_.data_rate;
  if (next < duration_) {
    sched_.schedule(next, OriginateData{sender, session_seq + 1});
  }
}

void MulticastNetwork::forward_data(NodeId node, const DataPacket& pkt, SimTime at) {
  auto& st = nodes_[node];
  if (!st.data_cache.insert(round_key(pkt.source, pkt.session_seq)).second) {
    ++trace_.duplicate_drops;
    return;
  }
  if (receiver_flag_[node]) {
    trace_.deliveries.push_back(
        {node, pkt.source, pkt.session_seq, pkt.origin_time, at, pkt.hop_record});
  }
  if (!st.fg_live(at)) {
    return;
  }
  const RelayDecision d = decide(node, PacketKind::Data);
  if (!d.forward) {
    trace_.attacker_drops.push_back({at, node, pkt.source, pkt.session_seq});
    return;
  }
  DataPacket out{pkt.source, pkt.session_seq, pkt.origin_time, pkt.hop_record};
  if (d.record_self) {
    out.hop_record.push_back(node);
  }
  transmit(node, at, d.delay, std::move(out));
}

namespace {

std::string hops_field(const std::vector<NodeId>& hops) {
  return hops.empty() ? std::string("-") : fmt::format("{}", fmt::join(hops, ","));
}

}  // namespace

std::string format_event(const NetEvent& ev) {
  return std::visit(
      [&](const auto& e) -> std::string {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, PacketArrival>) {
          return std::visit(
              [&](const auto& p) -> std::string {
                using P = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<P, JoinQuery>) {
                  return fmt::format("{:.9f} {} arrival {} {} query {} {} {} {}", ev.fire_at,
                                     ev.sequence, e.to, e.from, p.source, p.seq, p.prev_hop,
                                     hops_field(p.hop_record));
                } else if constexpr (std::is_same_v<P, JoinReply>) {
                  return fmt::format("{:.9f} {} arrival {} {} reply {} {} {} {}", ev.fire_at,
                                     ev.sequence, e.to, e.from, p.source, p.seq, p.next_hop,
                                     hops_field(p.hop_record));
                } else {
                  return fmt::format("{:.9f} {} arrival {} {} data {} {} - {}", ev.fire_at,
                                     ev.sequence, e.to, e.from, p.source, p.session_seq,
                                     hops_field(p.hop_record));
                }
              },
              *e.packet);
        } else if constexpr (std::is_same_v<T, WaypointArrival>) {
          return fmt::format("{:.9f} {} waypoint {} - - - - - -", ev.fire_at, ev.sequence, e.node);
        } else if constexpr (std::is_same_v<T, OriginateQuery>) {
          return fmt::format("{:.9f} {} originate_query {} - query {} {} - -", ev.fire_at,
                             ev.sequence, e.sender, e.sender, e.round);
        } else if constexpr (std::is_same_v<T, OriginateData>) {
          return fmt::format("{:.9f} {} originate_data {} - data {} {} - -", ev.fire_at,
                             ev.sequence, e.sender, e.sender, e.session_seq);
        } else {
          return fmt::format("{:.9f} {} end - - - - - - -", ev.fire_at, ev.sequence);
        }
      },
      ev.payload);
}

}  // namespace rushsim
