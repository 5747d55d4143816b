#include "rushsim/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include <fmt/format.h>

namespace rushsim {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_real(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
    throw ConfigError(key, fmt::format("expected a real number, got '{}'", v));
  }
  return out;
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(key, fmt::format("expected a non-negative integer, got '{}'", v));
  }
  return out;
}

std::string real(double v) { return fmt::format("{}", v); }

struct Key {
  const char* name;
  std::function<void(ExperimentConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

#define REAL_KEY(NAME, FIELD)                                                          \
  Key {                                                                                \
    NAME, [](ExperimentConfig& c, const std::string& k, const std::string& v) {       \
      c.FIELD = to_real(k, v);                                                         \
    },                                                                                 \
        [](const ExperimentConfig& c) { return real(c.FIELD); }                        \
  }
#define UINT_KEY(NAME, FIELD, TYPE)                                                    \
  Key {                                                                                \
    NAME, [](ExperimentConfig& c, const std::string& k, const std::string& v) {       \
      c.FIELD = static_cast<TYPE>(to_uint(k, v));                                      \
    },                                                                                 \
        [](const ExperimentConfig& c) { return std::to_string(c.FIELD); }              \
  }

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      REAL_KEY("area_width", area.width),
      REAL_KEY("area_height", area.height),
      UINT_KEY("n_nodes", n_nodes, std::size_t),
      UINT_KEY("n_receivers", n_receivers, std::size_t),
      UINT_KEY("n_attackers", n_attackers, std::size_t),
      Key{"attack",
          [](ExperimentConfig& c, const std::string& k, const std::string& v) {
            if (v != "none" && v != "rushing" && v != "blackhole" && v != "jellyfish" &&
                v != "neighbor") {
              throw ConfigError(k, fmt::format("unknown attack '{}'", v));
            }
            c.attack = v;
          },
          [](const ExperimentConfig& c) { return c.attack; }},
      Key{"placement",
          [](ExperimentConfig& c, const std::string& k, const std::string& v) {
            try {
              c.placement = parse_placement(v);
            } catch (const std::invalid_argument& e) {
              throw ConfigError(k, e.what());
            }
          },
          [](const ExperimentConfig& c) { return std::string(to_string(c.placement)); }},
      Key{"rush_scope",
          [](ExperimentConfig& c, const std::string& k, const std::string& v) {
            try {
              c.rush_scope = parse_rush_scope(v);
            } catch (const std::invalid_argument& e) {
              throw ConfigError(k, e.what());
            }
          },
          [](const ExperimentConfig& c) { return std::string(to_string(c.rush_scope)); }},
      REAL_KEY("rush_delay", rush_delay),
      REAL_KEY("drop_prob", drop_prob),
      REAL_KEY("hold_delay", hold_delay),
      REAL_KEY("speed", speed),
      REAL_KEY("duration", duration),
      REAL_KEY("refresh_interval", protocol.refresh_interval),
      REAL_KEY("fg_lifetime", protocol.fg_lifetime),
      REAL_KEY("data_rate", protocol.data_rate),
      REAL_KEY("data_start", protocol.data_start),
      REAL_KEY("range", radio.range),
      REAL_KEY("bitrate", radio.bitrate),
      REAL_KEY("proc_delay_lo", radio.proc_delay_lo),
      REAL_KEY("proc_delay_hi", radio.proc_delay_hi),
      UINT_KEY("ctrl_packet_bits", radio.ctrl_packet_bits, int),
      UINT_KEY("data_packet_bits", radio.data_packet_bits, int),
      UINT_KEY("seed", seed, std::uint64_t),
      UINT_KEY("runs", runs, std::size_t),
  };
  return table;
}

#undef REAL_KEY
#undef UINT_KEY

}  // namespace

void ExperimentConfig::validate() const {
  if (!(area.width > 0.0)) throw ConfigError("area_width", "must be > 0");
  if (!(area.height > 0.0)) throw ConfigError("area_height", "must be > 0");
  if (n_nodes < 2) throw ConfigError("n_nodes", "must be >= 2");
  if (n_receivers < 1) throw ConfigError("n_receivers", "must be >= 1");
  if (n_receivers + n_attackers + 1 > n_nodes) {
    throw ConfigError("n_receivers",
                      fmt::format("n_receivers ({}) + n_attackers ({}) + 1 sender exceeds "
                                  "n_nodes ({})",
                                  n_receivers, n_attackers, n_nodes));
  }
  if (attack != "none" && n_attackers < 1) {
    throw ConfigError("n_attackers", "must be >= 1 when an attack is configured");
  }
  if (!(speed >= 0.0)) throw ConfigError("speed", "must be >= 0");
  if (!(duration > 0.0)) throw ConfigError("duration", "must be > 0");
  if (runs < 1) throw ConfigError("runs", "must be >= 1");
  if (!(protocol.refresh_interval > 0.0)) throw ConfigError("refresh_interval", "must be > 0");
  if (!(protocol.fg_lifetime > 0.0)) throw ConfigError("fg_lifetime", "must be > 0");
  if (!(protocol.data_rate > 0.0)) throw ConfigError("data_rate", "must be > 0");
  if (!(protocol.data_start >= 0.0)) throw ConfigError("data_start", "must be >= 0");
  if (!(radio.range > 0.0)) throw ConfigError("range", "must be > 0");
  if (!(radio.bitrate > 0.0)) throw ConfigError("bitrate", "must be > 0");
  if (!(radio.proc_delay_lo >= 0.0)) throw ConfigError("proc_delay_lo", "must be >= 0");
  if (!(radio.proc_delay_lo <= radio.proc_delay_hi)) {
    throw ConfigError("proc_delay_hi", "must be >= proc_delay_lo");
  }
  if (radio.ctrl_packet_bits <= 0) throw ConfigError("ctrl_packet_bits", "must be > 0");
  if (radio.data_packet_bits <= 0) throw ConfigError("data_packet_bits", "must be > 0");
  if (auto profile = attack_profile()) {
    const auto issues = attack_issues(profile->kind, radio);
    if (!issues.empty()) {
      throw ConfigError("attack", issues.front());
    }
  }
}

std::optional<AttackProfile> ExperimentConfig::attack_profile() const {
  AttackProfile p;
  p.placement = placement;
  p.rush_scope = rush_scope;
  if (attack == "none") {
    return std::nullopt;
  } else if (attack == "rushing") {
    p.kind = Rushing{rush_delay};
  } else if (attack == "blackhole") {
    p.kind = Blackhole{drop_prob, rush_delay};
  } else if (attack == "jellyfish") {
    p.kind = Jellyfish{hold_delay, rush_delay};
  } else if (attack == "neighbor") {
    p.kind = Neighbor{};
  } else {
    throw ConfigError("attack", fmt::format("unknown attack '{}'", attack));
  }
  return p;
}

Settings parse_settings(const std::string& text) {
  Settings out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    const std::string t = trim(line);
    if (t.empty()) {
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("", fmt::format("line {}: expected 'key = value'", lineno));
    }
    std::string key = trim(std::string_view(t).substr(0, eq));
    std::string value = trim(std::string_view(t).substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("", fmt::format("line {}: empty key", lineno));
    }
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

Settings read_settings_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("", fmt::format("cannot read config file '{}'", path.string()));
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_settings(buf.str());
}

void apply_settings(ExperimentConfig& cfg, const Settings& settings) {
  for (const auto& [k, v] : settings) {
    bool found = false;
    for (const auto& key : keys()) {
      if (k == key.name) {
        key.set(cfg, k, v);
        found = true;
        break;
      }
    }
    if (!found) {
      throw ConfigError(k, "unknown configuration key");
    }
  }
}

ExperimentConfig load_config(const std::optional<std::filesystem::path>& path,
                             const Settings& overrides) {
  ExperimentConfig cfg;
  if (path) {
    apply_settings(cfg, read_settings_file(*path));
  }
  apply_settings(cfg, overrides);
  cfg.validate();
  return cfg;
}

Settings describe(const ExperimentConfig& cfg) {
  Settings out;
  for (const auto& key : keys()) {
    out.emplace_back(key.name, key.get(cfg));
  }
  return out;
}

}  // namespace rushsim
