#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "rushsim/messages.hpp"
#include "rushsim/rng.hpp"
#include "rushsim/trace.hpp"
#include "rushsim/world.hpp"

namespace rushsim {

struct ProtocolParams {
  SimTime refresh_interval = 3.0;
  SimTime fg_lifetime = 6.0;
  double data_rate = 4.0;  // packets per second
  SimTime data_start = 0.5;

  void validate() const;
};

struct Membership {
  NodeId sender = 0;
  std::vector<NodeId> receivers;
};

/// How a node relays a packet it has accepted for forwarding.
struct RelayDecision {
  bool forward = true;
  SimTime delay = 0.0;
  // false: leave hop_record and prev_hop untouched
  bool record_self = true;
};

/// Relay hook. Legitimate nodes have none; attackers plug one in.
/// `legit_delay` is the jitter a legitimate node would have used; it is drawn
/// regardless of the behavior so that seeded runs stay paired.
class RelayBehavior {
 public:
  virtual ~RelayBehavior() = default;
  virtual RelayDecision relay(PacketKind kind, SimTime legit_delay) = 0;
};

inline std::uint64_t round_key(NodeId source, std::uint32_t seq) {
  return (static_cast<std::uint64_t>(source) << 32) | seq;
}

struct NodeProtocolState {
  std::unordered_set<std::uint64_t> query_cache;
  std::unordered_set<std::uint64_t> data_cache;
  std::unordered_map<std::uint64_t, NodeId> upstream;
  std::optional<SimTime> fg_expiry;

  bool fg_live(SimTime now) const { return fg_expiry && now < *fg_expiry; }
};

/// Mesh multicast state machine (periodic JOIN QUERY flood with duplicate
/// suppression, JOIN REPLY back-propagation, forwarding-group data relay)
/// for every node of one run. Owned and driven by a single event loop.
class MulticastNetwork {
 public:
  MulticastNetwork(World& world, NetScheduler& scheduler, Membership members,
                   ProtocolParams params, std::uint64_t seed, RunTrace& trace);

  void set_behavior(NodeId node, std::unique_ptr<RelayBehavior> behavior);

  /// Seeds the queue: first query round, first data packet, waypoint
  /// arrivals and the end marker.
  void start(SimTime duration);

  void handle(const NetEvent& ev);

  void originate_query(NodeId sender, std::uint32_t round, SimTime at);
  void handle_query(NodeId node, const JoinQuery& pkt, SimTime at);
  void handle_reply(NodeId node, const JoinReply& pkt, SimTime at);
  void originate_data(NodeId sender, std::uint32_t session_seq, SimTime at);
  void forward_data(NodeId node, const DataPacket& pkt, SimTime at);

  const NodeProtocolState& state(NodeId node) const { return nodes_.at(node); }
  bool is_receiver(NodeId node) const { return receiver_flag_.at(node); }
  const Membership& members() const { return members_; }

  /// Writes one line per processed event when set.
  void set_event_log(std::ostream* out) { event_log_ = out; }

 private:
  SimTime draw_jitter(NodeId node, PacketKind kind);
  RelayDecision decide(NodeId node, PacketKind kind);
  void transmit(NodeId from, SimTime at, SimTime delay, Packet packet);

  World& world_;
  NetScheduler& sched_;
  Membership members_;
  ProtocolParams params_;
  RunTrace& trace_;
  SimTime duration_ = 0.0;

  std::vector<NodeProtocolState> nodes_;
  std::vector<bool> receiver_flag_;
  // data draws kept apart so they pair packet-for-packet across runs whose
  // control timing differs
  std::vector<RngStream> jitter_;
  std::vector<RngStream> data_jitter_;
  std::vector<std::unique_ptr<RelayBehavior>> behaviors_;
  std::ostream* event_log_ = nullptr;
};

/// Fixed-field text form of a processed event, used by the trace dump.
std::string format_event(const NetEvent& ev);

}  // namespace rushsim
