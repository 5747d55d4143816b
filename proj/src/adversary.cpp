#include "rushsim/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace rushsim {

std::string_view to_string(Placement p) {
  switch (p) {
    case Placement::NearSender:
      return "near-sender";
    case Placement::NearReceiver:
      return "near-receiver";
    case Placement::Uniform:
      return "uniform";
  }
  return "?";
}

std::string_view to_string(RushScope s) {
  return s == RushScope::All ? "all" : "control-only";
}

std::string_view attack_name(const AttackKind& k) {
  constexpr std::string_view names[] = {"rushing", "blackhole", "jellyfish", "neighbor"};
  return names[k.index()];
}

Placement parse_placement(std::string_view s) {
  if (s == "near-sender") return Placement::NearSender;
  if (s == "near-receiver") return Placement::NearReceiver;
  if (s == "uniform" || s == "anywhere") return Placement::Uniform;
  throw std::invalid_argument(fmt::format("unknown placement '{}'", s));
}

RushScope parse_rush_scope(std::string_view s) {
  if (s == "all") return RushScope::All;
  if (s == "control-only") return RushScope::ControlOnly;
  throw std::invalid_argument(fmt::format("unknown rush_scope '{}'", s));
}

namespace {

void check_rush(SimTime rush_delay, const RadioParams& radio, std::vector<std::string>& out) {
  if (!(rush_delay >= 0.0)) {
    out.push_back(fmt::format("rush_delay {} must be >= 0", rush_delay));
  } else if (!(rush_delay < radio.proc_delay_lo)) {
    out.push_back(fmt::format(
        "rush_delay {} does not undercut proc_delay_lo {} (pathological race)", rush_delay,
        radio.proc_delay_lo));
  }
}

class RushingRelay final : public RelayBehavior {
 public:
  RushingRelay(SimTime rush, RushScope scope) : rush_(rush), scope_(scope) {}

  RelayDecision relay(PacketKind kind, SimTime legit) override {
    const bool hurry = kind == PacketKind::Query || scope_ == RushScope::All;
    return {true, hurry ? rush_ : legit, true};
  }

 private:
  SimTime rush_;
  RushScope scope_;
};

class BlackholeRelay final : public RelayBehavior {
 public:
  BlackholeRelay(Blackhole cfg, RushScope scope, RngStream rng)
      : cfg_(cfg), scope_(scope), rng_(std::move(rng)) {}

  RelayDecision relay(PacketKind kind, SimTime legit) override {
    switch (kind) {
      case PacketKind::Query:
        return {true, cfg_.rush_delay, true};
      case PacketKind::Reply:
        return {true, scope_ == RushScope::All ? cfg_.rush_delay : legit, true};
      case PacketKind::Data:
        if (rng_.bernoulli(cfg_.drop_prob)) {
          return {false, 0.0, true};
        }
        return {true, legit, true};
    }
    return {true, legit, true};
  }

 private:
  Blackhole cfg_;
  RushScope scope_;
  RngStream rng_;
};

class JellyfishRelay final : public RelayBehavior {
 public:
  JellyfishRelay(Jellyfish cfg, RushScope scope) : cfg_(cfg), scope_(scope) {}

  RelayDecision relay(PacketKind kind, SimTime legit) override {
    switch (kind) {
      case PacketKind::Query:
        return {true, cfg_.rush_delay, true};
      case PacketKind::Reply:
        return {true, scope_ == RushScope::All ? cfg_.rush_delay : legit, true};
      case PacketKind::Data:
        return {true, legit + cfg_.hold_delay, true};
    }
    return {true, legit, true};
  }

 private:
  Jellyfish cfg_;
  RushScope scope_;
};

class NeighborRelay final : public RelayBehavior {
 public:
  RelayDecision relay(PacketKind, SimTime legit) override { return {true, legit, false}; }
};

Position draw_in_disk(RngStream& rng, Position centre, double radius, const Area& area) {
  double dx;
  double dy;
  do {
    dx = rng.uniform(-radius, radius);
    dy = rng.uniform(-radius, radius);
  } while (dx * dx + dy * dy > radius * radius);
  // projecting onto the area never moves the point away from an in-area centre
  return area.clamp({centre.x + dx, centre.y + dy});
}

}  // namespace

std::vector<std::string> attack_issues(const AttackKind& kind, const RadioParams& radio) {
  std::vector<std::string> out;
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Rushing>) {
          check_rush(k.rush_delay, radio, out);
        } else if constexpr (std::is_same_v<K, Blackhole>) {
          if (!(k.drop_prob >= 0.0 && k.drop_prob <= 1.0)) {
            out.push_back(fmt::format("drop_prob {} must lie in [0, 1]", k.drop_prob));
          }
          check_rush(k.rush_delay, radio, out);
        } else if constexpr (std::is_same_v<K, Jellyfish>) {
          if (!(k.hold_delay > 0.0) || !std::isfinite(k.hold_delay)) {
            out.push_back(fmt::format("hold_delay {} must be > 0", k.hold_delay));
          }
          check_rush(k.rush_delay, radio, out);
        }
      },
      kind);
  return out;
}

std::unique_ptr<RelayBehavior> make_behavior(const AttackProfile& profile, std::uint64_t seed,
                                             NodeId attacker) {
  return std::visit(
      [&](const auto& k) -> std::unique_ptr<RelayBehavior> {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Rushing>) {
          return std::make_unique<RushingRelay>(k.rush_delay, profile.rush_scope);
        } else if constexpr (std::is_same_v<K, Blackhole>) {
          return std::make_unique<BlackholeRelay>(k, profile.rush_scope,
                                                  RngStream(seed, Stream::Attack, attacker));
        } else if constexpr (std::is_same_v<K, Jellyfish>) {
          return std::make_unique<JellyfishRelay>(k, profile.rush_scope);
        } else {
          return std::make_unique<NeighborRelay>();
        }
      },
      profile.kind);
}

PlacementResult place_attackers(Placement placement, std::size_t n_attackers,
                                const Membership& members, std::vector<Position>& positions,
                                const Area& area, double range, std::uint64_t seed) {
  if (n_attackers == 0) {
    throw std::invalid_argument("place_attackers: attacker count must be >= 1");
  }
  std::vector<bool> member(positions.size(), false);
  if (members.sender < positions.size()) {
    member[members.sender] = true;
  }
  for (NodeId r : members.receivers) {
    if (r < positions.size()) {
      member[r] = true;
    }
  }
  PlacementResult out;
  for (NodeId id = 0; id < positions.size() && out.attackers.size() < n_attackers; ++id) {
    if (!member[id]) {
      out.attackers.push_back(id);
    }
  }
  if (out.attackers.size() < n_attackers) {
    throw std::invalid_argument(
        fmt::format("place_attackers: {} attackers requested but only {} non-member nodes",
                    n_attackers, out.attackers.size()));
  }

  RngStream rng(seed, Stream::Placement);
  switch (placement) {
    case Placement::Uniform:
      break;
    case Placement::NearSender:
      for (NodeId a : out.attackers) {
        positions[a] = draw_in_disk(rng, positions[members.sender], range, area);
      }
      break;
    case Placement::NearReceiver: {
      if (members.receivers.empty()) {
        throw std::invalid_argument("place_attackers: near-receiver needs receivers");
      }
      std::vector<NodeId> order = members.receivers;
      for (std::size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[rng.index(i)]);
      }
      for (std::size_t i = 0; i < out.attackers.size(); ++i) {
        const NodeId anchor = order[i % order.size()];
        out.anchors.push_back(anchor);
        positions[out.attackers[i]] = draw_in_disk(rng, positions[anchor], range, area);
      }
      break;
    }
  }
  return out;
}

}  // namespace rushsim
