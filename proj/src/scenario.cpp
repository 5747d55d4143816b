#include "rushsim/scenario.hpp"

#include <stdexcept>

namespace rushsim {

Simulation::Simulation(const Scenario& s)
    : duration_(s.duration), world_(s.area, s.radio, s.positions, s.speed, s.seed) {
  if (!(s.duration > 0.0)) {
    throw std::invalid_argument("scenario: duration must be > 0");
  }
  trace_.config = s.config_echo;
  network_ = std::make_unique<MulticastNetwork>(world_, scheduler_, s.members, s.protocol, s.seed,
                                                trace_);
  for (const auto& a : s.attackers) {
    if (a.node >= world_.size() || a.node == s.members.sender || network_->is_receiver(a.node)) {
      throw std::invalid_argument("scenario: attacker must be a non-member node");
    }
    network_->set_behavior(a.node, make_behavior(a.profile, s.seed, a.node));
    trace_.attackers.push_back(a.node);
  }
}

Simulation::~Simulation() = default;

const RunTrace& Simulation::run(std::ostream* event_log) {
  if (ran_) {
    throw std::logic_error("Simulation::run called twice");
  }
  ran_ = true;
  network_->set_event_log(event_log);
  network_->start(duration_);
  scheduler_.run_until(duration_, [this](const NetEvent& ev) { network_->handle(ev); });
  network_->set_event_log(nullptr);
  return trace_;
}

RunTrace simulate(const Scenario& scenario, std::ostream* event_log) {
  Simulation sim(scenario);
  sim.run(event_log);
  return sim.trace();
}

}  // namespace rushsim
