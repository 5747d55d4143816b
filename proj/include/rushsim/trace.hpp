#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rushsim/messages.hpp"

namespace rushsim {

struct TransmissionRecord {
  SimTime at;  // send instant
  NodeId node;
  PacketKind kind;
  NodeId source;
  std::uint32_t seq;  // round for queries/replies, session seq for data
  std::uint32_t fanout;
};

struct AttackerDrop {
  SimTime at;
  NodeId node;
  NodeId source;
  std::uint32_t session_seq;
};

struct DeliveryRecord {
  NodeId receiver;
  NodeId source;
  std::uint32_t session_seq;
  SimTime origin_time;
  SimTime arrival;
  std::vector<NodeId> hop_record;
};

/// A node gaining (or refreshing) its forwarding-group flag from a reply.
struct FgGrant {
  SimTime at;
  NodeId node;
  std::uint32_t round;
  NodeId receiver;
};

struct RoundRecord {
  std::uint32_t round;
  SimTime origin;
};

struct DataOrigin {
  std::uint32_t session_seq;
  SimTime origin;
};

/// Everything a run leaves behind for analysis. Append-only while running.
struct RunTrace {
  std::vector<std::pair<std::string, std::string>> config;
  SimTime duration = 0.0;
  SimTime refresh_interval = 0.0;
  NodeId sender = 0;
  std::vector<NodeId> receivers;
  std::vector<NodeId> attackers;

  std::vector<RoundRecord> rounds;
  std::vector<DataOrigin> data;
  std::vector<TransmissionRecord> transmissions;
  std::vector<AttackerDrop> attacker_drops;
  std::vector<DeliveryRecord> deliveries;
  std::vector<FgGrant> fg_grants;
  std::uint64_t duplicate_drops = 0;
  std::uint64_t stale_replies = 0;
  std::uint64_t processed_events = 0;
};

}  // namespace rushsim
