#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "rushsim/adversary.hpp"
#include "rushsim/protocol.hpp"
#include "rushsim/trace.hpp"
#include "rushsim/world.hpp"

namespace rushsim {

struct AttackerSpec {
  NodeId node;
  AttackProfile profile;
};

/// Fully resolved input of one run: explicit positions, roles and attackers.
struct Scenario {
  Area area;
  RadioParams radio;
  ProtocolParams protocol;
  std::vector<Position> positions;
  double speed = 0.0;
  Membership members;
  std::vector<AttackerSpec> attackers;
  SimTime duration = 1000.0;
  std::uint64_t seed = 1;
  // copied into RunTrace::config
  std::vector<std::pair<std::string, std::string>> config_echo;
};

/// One run: owns the clock, the world and the protocol state.
class Simulation {
 public:
  explicit Simulation(const Scenario& scenario);
  ~Simulation();
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  /// Runs to the horizon; may be called once.
  const RunTrace& run(std::ostream* event_log = nullptr);

  const World& world() const { return world_; }
  const MulticastNetwork& network() const { return *network_; }
  const RunTrace& trace() const { return trace_; }

 private:
  SimTime duration_;
  World world_;
  NetScheduler scheduler_;
  RunTrace trace_;
  std::unique_ptr<MulticastNetwork> network_;
  bool ran_ = false;
};

RunTrace simulate(const Scenario& scenario, std::ostream* event_log = nullptr);

}  // namespace rushsim
