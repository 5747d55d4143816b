#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rushsim/protocol.hpp"
#include "rushsim/rng.hpp"
#include "rushsim/world.hpp"

namespace rushsim {

/// Forwards with a near-zero processing delay to win duplicate-suppression
/// races. Still records itself in every packet it relays.
struct Rushing {
  SimTime rush_delay = 0.0005;
};

/// Rushes queries to get into the forwarding group, then drops data packets
/// with probability drop_prob (1.0 drops everything).
struct Blackhole {
  double drop_prob = 1.0;
  SimTime rush_delay = 0.0005;
};

/// Rushes queries, then holds each data packet for hold_delay on top of the
/// normal processing time.
struct Jellyfish {
  SimTime hold_delay = 0.5;
  SimTime rush_delay = 0.0005;
};

/// Relays without recording itself, so downstream nodes adopt a false
/// upstream.
struct Neighbor {};

using AttackKind = std::variant<Rushing, Blackhole, Jellyfish, Neighbor>;

enum class Placement { NearSender, NearReceiver, Uniform };

/// Which packets a rushing attacker hurries along.
enum class RushScope { ControlOnly, All };

struct AttackProfile {
  AttackKind kind = Rushing{};
  Placement placement = Placement::Uniform;
  RushScope rush_scope = RushScope::All;
};

std::string_view to_string(Placement p);
std::string_view to_string(RushScope s);
std::string_view attack_name(const AttackKind& k);
Placement parse_placement(std::string_view s);
RushScope parse_rush_scope(std::string_view s);

/// Violated invariants of an attack against the radio's jitter window, one
/// message each. A rush delay that does not undercut the legitimate minimum
/// is reported here as pathological.
std::vector<std::string> attack_issues(const AttackKind& kind, const RadioParams& radio);

std::unique_ptr<RelayBehavior> make_behavior(const AttackProfile& profile,
                                             std::uint64_t seed, NodeId attacker);

struct PlacementResult {
  std::vector<NodeId> attackers;
  // receiver each NearReceiver attacker was anchored to (empty otherwise)
  std::vector<NodeId> anchors;
};

/// Picks the attacker ids (the first non-member ids after the sender and
/// receivers) and, for the Near* strategies, rewrites their starting
/// positions to a uniform point in the radio disk around the anchor,
/// clipped to the area. Uniform keeps the area-uniform position.
PlacementResult place_attackers(Placement placement, std::size_t n_attackers,
                                const Membership& members, std::vector<Position>& positions,
                                const Area& area, double range, std::uint64_t seed);

}  // namespace rushsim
