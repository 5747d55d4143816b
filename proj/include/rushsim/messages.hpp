#pragma once

#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

#include "rushsim/engine.hpp"
#include "rushsim/world.hpp"

namespace rushsim {

enum class PacketKind : std::uint8_t { Query, Reply, Data };

/// Flooded group solicitation. (source, seq) names the discovery round.
struct JoinQuery {
  NodeId source;
  std::uint32_t seq;
  NodeId prev_hop;
  std::vector<NodeId> hop_record;
};

/// Receiver-originated reply travelling back along the upstream chain.
/// Every neighbor hears it; only `next_hop` acts on it.
struct JoinReply {
  NodeId source;
  std::uint32_t seq;
  NodeId receiver;
  NodeId next_hop;
  std::vector<NodeId> hop_record;
};

struct DataPacket {
  NodeId source;
  std::uint32_t session_seq;
  SimTime origin_time;
  std::vector<NodeId> hop_record;
};

using Packet = std::variant<JoinQuery, JoinReply, DataPacket>;

inline PacketKind kind_of(const Packet& p) {
  return static_cast<PacketKind>(p.index());
}

// Event payloads. Packets are shared between all arrivals of one broadcast
// and never mutated after scheduling.
struct PacketArrival {
  NodeId to;
  NodeId from;
  std::shared_ptr<const Packet> packet;
};
struct WaypointArrival {
  NodeId node;
};
struct OriginateQuery {
  NodeId sender;
  std::uint32_t round;
};
struct OriginateData {
  NodeId sender;
  std::uint32_t session_seq;
};
struct SimEnd {};

using EventPayload = std::variant<PacketArrival, WaypointArrival, OriginateQuery, OriginateData, SimEnd>;
using NetEvent = SimEvent<EventPayload>;
using NetScheduler = Scheduler<EventPayload>;

}  // namespace rushsim
