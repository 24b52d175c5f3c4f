#pragma once

#include <edgeplace/strategy.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace edgeplace {

struct SyntheticSpec {
  std::size_t tasks = 5;
  std::size_t datasets = 8;
  SizeRange sizes;
  std::uint64_t seed = 0;
};

struct EnvironmentSpec {
  std::size_t edge_count = 3;
  double capacity_multiplier = kBasicEdgeCapacityMultiplier;
  double bandwidth_multiplier = 1.0;
};

enum class WorkflowScale { Small, Medium, Large };

struct Scenario {
  std::string id = "scenario";
  std::optional<std::filesystem::path> workflow_path; ///< resolved against the scenario file
  std::optional<SyntheticSpec> synthetic;
  WorkflowScale scale = WorkflowScale::Medium;
  EnvironmentSpec environment;
  double private_ratio = 0.25;
  std::vector<StrategyKind> strategies = {StrategyKind::GaDpso, StrategyKind::NgaDpso,
                                          StrategyKind::Gs, StrategyKind::DcoKmeans};
  std::size_t repetitions = 100;
  std::uint64_t base_seed = 0;
  StrategySettings settings;
  /// When false, wall_ms is reported as 0 so report bytes are fully reproducible.
  bool record_timing = true;
};

/// Parses and validates scenario JSON; unknown fields are rejected.
/// Relative workflow paths resolve against `base_dir`. Throws ConfigError.
Scenario load_scenario(std::string_view json_text, const std::filesystem::path& base_dir = {});
Scenario load_scenario_file(const std::filesystem::path& path);

/// Workflow named by the scenario, all datasets flexible.
Workflow scenario_workflow(const Scenario& s);
/// Basic environment rescaled per the scenario's environment spec.
Environment scenario_environment(const Scenario& s, const Workflow& w);
std::string workflow_label(const Scenario& s);

struct ReportRow {
  std::string scenario;
  std::string workflow;
  std::string strategy;
  std::size_t repetition = 0;
  std::uint64_t seed = 0;
  double best_time_s = 0.0;
  bool feasible = true;
  std::size_t iterations_to_best = 0;
  std::size_t iterations_total = 0;
  double wall_ms = 0.0;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;
};

struct SummaryRow {
  std::string strategy;
  std::size_t runs = 0;
  std::size_t feasible_runs = 0;
  MeanStd best_time_s;
  MeanStd iterations_to_best;
  MeanStd wall_ms;
};

struct ExperimentReport {
  std::vector<ReportRow> rows;        ///< strategy order of the scenario, then repetition
  std::vector<SummaryRow> summaries;  ///< one per strategy
};

/// Runs every strategy for every repetition r with seed base_seed + r; the
/// private-dataset assignment of repetition r is shared by all strategies.
/// `threads` changes wall time only.
ExperimentReport run_experiment(const Scenario& s, std::size_t threads = 1);

std::vector<SummaryRow> summarize(const std::vector<ReportRow>& rows);

enum class ReportFormat { Csv, Json };

inline constexpr std::string_view kCsvHeader =
    "scenario,workflow,strategy,repetition,seed,best_time_s,feasible,iterations_to_best,"
    "iterations_total,wall_ms";

/// CSV (rows only) or JSON (rows + summaries). Throws ConfigError when rows are empty.
void write_report(const ExperimentReport& report, ReportFormat format, std::ostream& out);
/// Throws DataError when the destination cannot be written.
void write_report(const ExperimentReport& report, ReportFormat format,
                  const std::filesystem::path& destination);

/// Per-strategy mean and stddev of transfer time divided by 10, for figure plotting.
void write_plot_data(const ExperimentReport& report, std::ostream& out);

} // namespace edgeplace
