#include "rushsim/world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rushsim {

double distance(Position a, Position b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

Position Area::clamp(Position p) const {
  return {std::clamp(p.x, 0.0, width), std::clamp(p.y, 0.0, height)};
}

SimTime MotionState::arrive_at() const {
  if (speed <= 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return depart_at + distance(origin, destination) / speed;
}

Position MotionState::at(SimTime t) const {
  if (speed <= 0.0 || t <= depart_at) {
    return origin;
  }
  const double len = distance(origin, destination);
  const double travelled = (t - depart_at) * speed;
  if (len == 0.0 || travelled >= len) {
    return destination;
  }
  const double f = travelled / len;
  return {origin.x + f * (destination.x - origin.x), origin.y + f * (destination.y - origin.y)};
}

void RadioParams::validate() const {
  if (!(range > 0.0)) {
    throw std::invalid_argument("radio: range must be > 0");
  }
  if (!(bitrate > 0.0)) {
    throw std::invalid_argument("radio: bitrate must be > 0");
  }
  if (!(proc_delay_lo >= 0.0) || !(proc_delay_lo <= proc_delay_hi)) {
    throw std::invalid_argument("radio: need 0 <= proc_delay_lo <= proc_delay_hi");
  }
  if (ctrl_packet_bits <= 0 || data_packet_bits <= 0) {
    throw std::invalid_argument("radio: packet sizes must be positive");
  }
}

std::vector<Position> init_world(const Area& area, std::size_t n_nodes, std::uint64_t seed) {
  if (!(area.width > 0.0) || !(area.height > 0.0)) {
    throw std::invalid_argument("init_world: area must have positive width and height");
  }
  if (n_nodes < 2) {
    throw std::invalid_argument("init_world: need at least 2 nodes");
  }
  std::vector<Position> out;
  out.reserve(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    RngStream rng(seed, Stream::Layout, i);
    const double x = rng.uniform(0.0, area.width);
    const double y = rng.uniform(0.0, area.height);
    out.push_back({x, y});
  }
  return out;
}

World::World(Area area, RadioParams radio, std::vector<Position> initial, double speed,
             std::uint64_t seed)
    : area_(area), radio_(radio), speed_(speed) {
  if (!(area_.width > 0.0) || !(area_.height > 0.0)) {
    throw std::invalid_argument("world: area must have positive width and height");
  }
  if (!(speed_ >= 0.0) || !std::isfinite(speed_)) {
    throw std::invalid_argument("world: speed must be finite and >= 0");
  }
  radio_.validate();
  nodes_.reserve(initial.size());
  for (std::size_t i = 0; i < initial.size(); ++i) {
    if (!area_.contains(initial[i])) {
      throw std::invalid_argument("world: node " + std::to_string(i) + " starts outside the area");
    }
    nodes_.push_back(NodeMotion{{}, RngStream(seed, Stream::Mobility, i)});
    auto& m = nodes_.back();
    m.legs.push_back(plan_leg(m, initial[i], 0.0));
  }
}

MotionState World::plan_leg(const NodeMotion& m, Position from, SimTime depart) const {
  if (speed_ == 0.0) {
    return {from, from, 0.0, depart};
  }
  const double x = m.rng.uniform(0.0, area_.width);
  const double y = m.rng.uniform(0.0, area_.height);
  return {from, {x, y}, speed_, depart};
}

const MotionState& World::leg_covering(NodeId node, SimTime t) const {
  const auto& m = nodes_.at(node);
  std::size_t i = 0;
  while (t > m.legs[i].arrive_at()) {
    if (i + 1 == m.legs.size()) {
      const auto& last = m.legs.back();
      m.legs.push_back(plan_leg(m, last.destination, last.arrive_at()));
    }
    ++i;
  }
  return m.legs[i];
}

Position World::position_at(NodeId node, SimTime t) const {
  return area_.clamp(leg_covering(node, t).at(t));
}

std::vector<NodeId> World::neighbors(NodeId node, SimTime t) const {
  const Position self = position_at(node, t);
  const double r2 = radio_.range * radio_.range;
  std::vector<NodeId> out;
  for (NodeId other = 0; other < nodes_.size(); ++other) {
    if (other == node) {
      continue;
    }
    const Position p = position_at(other, t);
    const double dx = p.x - self.x;
    const double dy = p.y - self.y;
    if (dx * dx + dy * dy <= r2) {
      out.push_back(other);
    }
  }
  return out;
}

std::vector<Arrival> World::broadcast(NodeId from, SimTime at, SimTime proc_delay,
                                      int bits) const {
  if (!(proc_delay >= 0.0)) {
    throw std::invalid_argument("broadcast: negative processing delay");
  }
  const SimTime send = at + proc_delay;
  const SimTime arrive = send + radio_.tx_delay(bits);
  std::vector<Arrival> out;
  for (NodeId n : neighbors(from, send)) {
    out.push_back({n, arrive});
  }
  return out;
}

std::optional<SimTime> World::waypoint_due(NodeId node) const {
  const SimTime t = nodes_.at(node).legs.front().arrive_at();
  if (!std::isfinite(t)) {
    return std::nullopt;
  }
  return t;
}

void World::advance_leg(NodeId node) {
  auto& m = nodes_.at(node);
  if (m.legs.size() == 1) {
    const auto& last = m.legs.back();
    m.legs.push_back(plan_leg(m, last.destination, last.arrive_at()));
  }
  m.legs.pop_front();
}

void World::relocate(NodeId node, Position p) {
  if (!area_.contains(p)) {
    throw std::invalid_argument("relocate: position outside the area");
  }
  auto& m = nodes_.at(node);
  // destinations stay as drawn; only the timing chain moves
  Position from = p;
  SimTime depart = m.legs.front().depart_at;
  for (auto& leg : m.legs) {
    leg.origin = from;
    leg.depart_at = depart;
    if (leg.speed == 0.0) {
      leg.destination = from;
    }
    from = leg.destination;
    depart = leg.arrive_at();
  }
}

}  // namespace rushsim
