#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rushsim/adversary.hpp"
#include "rushsim/protocol.hpp"
#include "rushsim/world.hpp"

namespace rushsim {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct ExperimentConfig {
  Area area;
  std::size_t n_nodes = 50;
  std::size_t n_receivers = 5;
  std::size_t n_attackers = 1;
  // none | rushing | blackhole | jellyfish | neighbor
  std::string attack = "rushing";
  SimTime rush_delay = 0.0005;
  double drop_prob = 1.0;
  SimTime hold_delay = 0.5;
  Placement placement = Placement::Uniform;
  RushScope rush_scope = RushScope::All;
  double speed = 1.0;
  SimTime duration = 1000.0;
  ProtocolParams protocol;
  RadioParams radio;
  std::uint64_t seed = 1;
  std::size_t runs = 30;

  /// Throws ConfigError naming the offending key.
  void validate() const;
  /// Empty when attack is "none".
  std::optional<AttackProfile> attack_profile() const;
};

using Settings = std::vector<std::pair<std::string, std::string>>;

/// Parses `key = value` lines; '#' starts a comment. Duplicate keys keep the
/// last value.
Settings parse_settings(const std::string& text);
Settings read_settings_file(const std::filesystem::path& path);

/// Applies settings in order. Unknown keys and malformed values throw
/// ConfigError. Does not validate cross-field invariants.
void apply_settings(ExperimentConfig& cfg, const Settings& settings);

/// Defaults, then file (if any), then overrides; validated.
ExperimentConfig load_config(const std::optional<std::filesystem::path>& path,
                             const Settings& overrides = {});

/// Every key with its effective value, in the documented order.
Settings describe(const ExperimentConfig& cfg);

}  // namespace rushsim
