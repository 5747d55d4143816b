#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rushsim/analysis.hpp"
#include "rushsim/config.hpp"
#include "rushsim/scenario.hpp"

namespace rushsim {

struct ResultRow {
  std::size_t run_id = 0;
  std::uint64_t seed = 0;
  std::string placement;
  std::string attack;
  std::size_t n_nodes = 0;
  double speed = 0.0;
  RunMetrics metrics;
};

/// Builds the scenario for run `run_index` of `cfg`: seed = cfg.seed +
/// run_index, node 0 is the sender, nodes 1..n_receivers are receivers,
/// attackers are the next ids.
Scenario build_scenario(const ExperimentConfig& cfg, std::size_t run_index);

ResultRow run_single(const ExperimentConfig& cfg, std::size_t run_index,
                     std::ostream* event_log = nullptr);

enum class Execution { Serial, Parallel };

struct SweepOutcome {
  std::vector<ResultRow> rows;  // complete prefix in run order
  std::optional<std::string> error;
  bool partial() const { return error.has_value(); }
};

/// Runs every config's `runs` replicas. Rows come out in (config, run) order
/// with run_id numbered across the whole sweep, whatever the execution mode.
/// `event_log`, if given, receives the event trace of the first run only.
SweepOutcome run_sweep(const std::vector<ExperimentConfig>& points,
                       Execution mode = Execution::Parallel, std::ostream* event_log = nullptr);

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg,
                                      Execution mode = Execution::Parallel);

/// Preset sweeps. fig7 / fig8 / fig9 run the configured attack at near-sender
/// / near-receiver / uniform placement and a no-attack baseline, for speeds
/// {0, 1, 10}. "placements" runs the three placements at the configured speed.
std::vector<ExperimentConfig> expand_preset(std::string_view name, const ExperimentConfig& base);

/// Defaults a preset starts from before file and flag settings apply.
ExperimentConfig preset_base(std::string_view name);
bool is_preset(std::string_view name);

inline constexpr std::string_view kCsvHeader =
    "run_id,seed,placement,attack,n_nodes,speed,asr_fg,asr_data,pdr,mean_delay,"
    "drops_attacker,drops_duplicate,drops_stale_reply";

std::string csv_line(const ResultRow& row);
void write_csv(const std::vector<ResultRow>& rows, std::ostream& out);
/// Throws std::runtime_error when rows are empty or the path is unwritable.
void emit_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path);

struct MeanCi {
  std::size_t n = 0;
  double mean = 0.0;
  double half_width = 0.0;  // 95% Student-t; 0 for n < 2

  double lo() const { return mean - half_width; }
  double hi() const { return mean + half_width; }
};

MeanCi mean_ci95(const std::vector<double>& values);

struct GroupSummary {
  std::string placement;
  std::string attack;
  std::size_t n_nodes = 0;
  double speed = 0.0;
  MeanCi asr_fg;
  MeanCi asr_data;
  MeanCi pdr;
  MeanCi mean_delay;
};

/// Groups by (placement, attack, n_nodes, speed) in first-appearance order.
std::vector<GroupSummary> summarize(const std::vector<ResultRow>& rows);
void write_summary(const std::vector<GroupSummary>& groups, std::ostream& out);

}  // namespace rushsim
