#include "rushsim/harness.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>
#include <fmt/format.h>

namespace rushsim {

Scenario build_scenario(const ExperimentConfig& cfg, std::size_t run_index) {
  Scenario s;
  s.area = cfg.area;
  s.radio = cfg.radio;
  s.protocol = cfg.protocol;
  s.speed = cfg.speed;
  s.duration = cfg.duration;
  s.seed = cfg.seed + run_index;
  s.positions = init_world(cfg.area, cfg.n_nodes, s.seed);
  s.members.sender = 0;
  for (std::size_t r = 1; r <= cfg.n_receivers; ++r) {
    s.members.receivers.push_back(static_cast<NodeId>(r));
  }
  if (auto profile = cfg.attack_profile()) {
    const auto placed = place_attackers(profile->placement, cfg.n_attackers, s.members,
                                        s.positions, cfg.area, cfg.radio.range, s.seed);
    for (NodeId a : placed.attackers) {
      s.attackers.push_back({a, *profile});
    }
  }
  return s;
}

ResultRow run_single(const ExperimentConfig& cfg, std::size_t run_index, std::ostream* event_log) {
  Scenario scenario = build_scenario(cfg, run_index);
  scenario.config_echo = describe(cfg);
  Simulation sim(scenario);
  const RunTrace& trace = sim.run(event_log);
  ResultRow row;
  row.run_id = run_index;
  row.seed = cfg.seed + run_index;
  row.placement = std::string(to_string(cfg.placement));
  row.attack = cfg.attack;
  row.n_nodes = cfg.n_nodes;
  row.speed = cfg.speed;
  row.metrics = compute_metrics(trace);
  return row;
}

SweepOutcome run_sweep(const std::vector<ExperimentConfig>& points, Execution mode,
                       std::ostream* event_log) {
  struct Job {
    std::size_t point;
    std::size_t run;
  };
  std::vector<Job> jobs;
  for (std::size_t p = 0; p < points.size(); ++p) {
    points[p].validate();
    for (std::size_t r = 0; r < points[p].runs; ++r) {
      jobs.push_back({p, r});
    }
  }

  std::vector<std::optional<ResultRow>> results(jobs.size());
  std::vector<std::optional<std::string>> errors(jobs.size());
  const auto one = [&](std::size_t i) {
    try {
      results[i] = run_single(points[jobs[i].point], jobs[i].run, i == 0 ? event_log : nullptr);
    } catch (const std::exception& e) {
      errors[i] = fmt::format("run {} (config {}, replica {}): {}", i, jobs[i].point,
                              jobs[i].run, e.what());
    }
  };

  const auto n = static_cast<std::ptrdiff_t>(jobs.size());
  if (mode == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      one(static_cast<std::size_t>(i));
    }
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      one(static_cast<std::size_t>(i));
    }
  }

  SweepOutcome out;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (errors[i]) {
      out.error = errors[i];
      break;
    }
    results[i]->run_id = i;
    out.rows.push_back(std::move(*results[i]));
  }
  return out;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg, Execution mode) {
  auto outcome = run_sweep({cfg}, mode);
  if (outcome.error) {
    throw std::runtime_error(*outcome.error);
  }
  return std::move(outcome.rows);
}

bool is_preset(std::string_view name) {
  return name == "fig7" || name == "fig8" || name == "fig9" || name == "placements" ||
         name == "paper-fig-7-9";
}

ExperimentConfig preset_base(std::string_view name) {
  if (!is_preset(name)) {
    throw ConfigError("preset", fmt::format("unknown preset '{}'", name));
  }
  ExperimentConfig cfg;
  cfg.n_nodes = 50;
  cfg.n_receivers = 5;
  cfg.n_attackers = 1;
  cfg.attack = "rushing";
  cfg.duration = 1000.0;
  cfg.runs = 30;
  return cfg;
}

std::vector<ExperimentConfig> expand_preset(std::string_view name, const ExperimentConfig& base) {
  if (!is_preset(name)) {
    throw ConfigError("preset", fmt::format("unknown preset '{}'", name));
  }
  std::vector<ExperimentConfig> out;
  if (name == "placements" || name == "paper-fig-7-9") {
    for (Placement p : {Placement::NearSender, Placement::NearReceiver, Placement::Uniform}) {
      ExperimentConfig c = base;
      c.placement = p;
      out.push_back(c);
    }
    return out;
  }
  const Placement placement = name == "fig7"   ? Placement::NearSender
                              : name == "fig8" ? Placement::NearReceiver
                                               : Placement::Uniform;
  for (double speed : {0.0, 1.0, 10.0}) {
    ExperimentConfig attacked = base;
    attacked.placement = placement;
    attacked.speed = speed;
    if (attacked.attack == "none") {
      attacked.attack = "rushing";
    }
    ExperimentConfig baseline = attacked;
    baseline.attack = "none";
    out.push_back(attacked);
    out.push_back(baseline);
  }
  return out;
}

std::string csv_line(const ResultRow& r) {
  const auto& m = r.metrics;
  return fmt::format("{},{},{},{},{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{},{},{}", r.run_id, r.seed,
                     r.placement, r.attack, r.n_nodes, r.speed, m.asr_fg.value, m.asr_data.value,
                     m.pdr.value, m.mean_delay.value, m.drops_attacker, m.drops_duplicate,
                     m.drops_stale_reply);
}

void write_csv(const std::vector<ResultRow>& rows, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << csv_line(r) << '\n';
  }
}

void emit_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path) {
  if (rows.empty()) {
    throw std::runtime_error("emit_csv: no rows");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error(fmt::format("emit_csv: cannot write '{}'", path.string()));
  }
  write_csv(rows, out);
  if (!out) {
    throw std::runtime_error(fmt::format("emit_csv: write to '{}' failed", path.string()));
  }
}

MeanCi mean_ci95(const std::vector<double>& values) {
  MeanCi out;
  out.n = values.size();
  if (values.empty()) {
    return out;
  }
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(out.n);
  if (out.n < 2) {
    return out;
  }
  double ss = 0.0;
  for (double v : values) {
    ss += (v - out.mean) * (v - out.mean);
  }
  const double sd = std::sqrt(ss / static_cast<double>(out.n - 1));
  const boost::math::students_t dist(static_cast<double>(out.n - 1));
  const double t = boost::math::quantile(boost::math::complement(dist, 0.025));
  out.half_width = t * sd / std::sqrt(static_cast<double>(out.n));
  return out;
}

std::vector<GroupSummary> summarize(const std::vector<ResultRow>& rows) {
  struct Acc {
    GroupSummary g;
    std::vector<double> fg, data, pdr, delay;
  };
  std::vector<Acc> groups;
  for (const auto& r : rows) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const Acc& a) {
      return a.g.placement == r.placement && a.g.attack == r.attack && a.g.n_nodes == r.n_nodes &&
             a.g.speed == r.speed;
    });
    if (it == groups.end()) {
      groups.push_back({});
      it = std::prev(groups.end());
      it->g.placement = r.placement;
      it->g.attack = r.attack;
      it->g.n_nodes = r.n_nodes;
      it->g.speed = r.speed;
    }
    it->fg.push_back(r.metrics.asr_fg.value);
    it->data.push_back(r.metrics.asr_data.value);
    it->pdr.push_back(r.metrics.pdr.value);
    it->delay.push_back(r.metrics.mean_delay.value);
  }
  std::vector<GroupSummary> out;
  for (auto& a : groups) {
    a.g.asr_fg = mean_ci95(a.fg);
    a.g.asr_data = mean_ci95(a.data);
    a.g.pdr = mean_ci95(a.pdr);
    a.g.mean_delay = mean_ci95(a.delay);
    out.push_back(a.g);
  }
  return out;
}

void write_summary(const std::vector<GroupSummary>& groups, std::ostream& out) {
  out << "# summary: mean [95% CI] per (placement, attack, n_nodes, speed)\n";
  for (const auto& g : groups) {
    out << fmt::format(
        "# {} {} n_nodes={} speed={} runs={} asr_data={:.6f} [{:.6f}, {:.6f}] "
        "asr_fg={:.6f} [{:.6f}, {:.6f}] pdr={:.6f} [{:.6f}, {:.6f}] mean_delay={:.6f}\n",
        g.placement, g.attack, g.n_nodes, g.speed, g.asr_data.n, g.asr_data.mean, g.asr_data.lo(),
        g.asr_data.hi(), g.asr_fg.mean, g.asr_fg.lo(), g.asr_fg.hi(), g.pdr.mean, g.pdr.lo(),
        g.pdr.hi(), g.mean_delay.mean);
  }
}

}  // namespace rushsim
