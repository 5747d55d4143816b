#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "rushsim/engine.hpp"
#include "rushsim/rng.hpp"

namespace rushsim {

using NodeId = std::uint32_t;

struct Position {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Position&, const Position&) = default;
};

double distance(Position a, Position b);

struct Area {
  double width = 500.0;
  double height = 500.0;

  bool contains(Position p) const {
    return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height;
  }
  Position clamp(Position p) const;
};

/// One random-waypoint leg: straight line from origin to destination.
struct MotionState {
  Position origin;
  Position destination;
  double speed = 0.0;
  SimTime depart_at = 0.0;

  /// +inf for a stationary leg.
  SimTime arrive_at() const;
  Position at(SimTime t) const;
};

struct RadioParams {
  double range = 250.0;
  double bitrate = 2'000'000.0;
  SimTime proc_delay_lo = 0.005;
  SimTime proc_delay_hi = 0.015;
  int ctrl_packet_bits = 512;
  int data_packet_bits = 4096;

  SimTime tx_delay(int bits) const { return static_cast<double>(bits) / bitrate; }
  void validate() const;
};

struct Arrival {
  NodeId to;
  SimTime at;
};

/// Uniform initial positions, one independent stream per node.
std::vector<Position> init_world(const Area& area, std::size_t n_nodes, std::uint64_t seed);

/// Node motion under random waypoint with zero pause time, plus unit-disk
/// broadcast reachability. Legs beyond the current one are planned lazily
/// from each node's own mobility stream, so positions can be evaluated at
/// any future instant without perturbing the draw sequence.
class World {
 public:
  World(Area area, RadioParams radio, std::vector<Position> initial, double speed,
        std::uint64_t seed);

  std::size_t size() const { return nodes_.size(); }
  const Area& area() const { return area_; }
  const RadioParams& radio() const { return radio_; }
  double speed() const { return speed_; }

  Position position_at(NodeId node, SimTime t) const;

  /// Nodes other than `node` within the closed radio disk at time t,
  /// ascending by id.
  std::vector<NodeId> neighbors(NodeId node, SimTime t) const;

  /// Receivers and arrival times of a transmission that leaves `from` at
  /// at + proc_delay. Reachability is evaluated at that send instant.
  std::vector<Arrival> broadcast(NodeId from, SimTime at, SimTime proc_delay, int bits) const;

  const MotionState& current_leg(NodeId node) const { return nodes_.at(node).legs.front(); }

  /// When the current leg ends; empty for stationary nodes.
  std::optional<SimTime> waypoint_due(NodeId node) const;

  /// Handles a waypoint arrival: the next leg departs immediately.
  void advance_leg(NodeId node);

  /// Moves a node's starting point. Only valid before the clock starts.
  void relocate(NodeId node, Position p);

 private:
  struct NodeMotion {
    mutable std::deque<MotionState> legs;
    mutable RngStream rng;
  };

  MotionState plan_leg(const NodeMotion& m, Position from, SimTime depart) const;
  const MotionState& leg_covering(NodeId node, SimTime t) const;

  Area area_;
  RadioParams radio_;
  double speed_;
  std::vector<NodeMotion> nodes_;
};

}  // namespace rushsim
