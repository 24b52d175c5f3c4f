#pragma once

#include <edgeplace/gadpso.hpp>

#include <cstdint>
#include <vector>

namespace edgeplace {

/// Bandwidth-weighted data dependency between two datasets, in seconds.
///
/// Count of tasks consuming both datasets times: min size over the link for
/// two flexible datasets, the flexible dataset's size for a mixed pair, 0 for
/// two fixed datasets. `preplacement` gives each dataset's current datacenter;
/// colocated pairs divide by the fastest link in the environment.
double dependency_degree(DatasetId a, DatasetId b, const Workflow& w, const Environment& env,
                         const std::vector<DatacenterId>& preplacement);

/// Fixed datasets at their pinned datacenter, flexible ones at the first cloud datacenter.
std::vector<DatacenterId> default_preplacement(const Workflow& w, const Environment& env);

/// Symmetric dependency matrix over all datasets.
class DependencyMatrix {
public:
  DependencyMatrix(const Workflow& w, const Environment& env,
                   const std::vector<DatacenterId>& preplacement);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * n_ + j]; }
  std::vector<double> row(std::size_t i) const;

private:
  std::size_t n_;
  std::vector<double> values_;
};

struct StrategyResult {
  Particle particle;
  PlacementOutcome outcome;
  RunStats stats;
  std::vector<Fitness> history;
};

/// Two-stage clustering placement: k-means over dependency rows of the
/// initial flexible datasets, greedy capacity-aware cluster assignment with
/// spill to cloud, then generated datasets by current dependency.
StrategyResult run_dco_kmeans(const Workflow& w, const Environment& env, std::uint64_t seed);

struct GsConfig {
  std::size_t population = 100;
  std::size_t max_generations = 1000;
  std::size_t stall_window = 80;
  std::size_t tournament_size = 2;
  double crossover_rate = 0.8;
  double mutation_rate = 0.05; ///< per gene
  std::size_t threads = 1;

  void validate() const;
};

/// Generational GA over binary-encoded placements of the flexible datasets.
StrategyResult run_gs(const Workflow& w, const Environment& env, const GsConfig& cfg,
                      std::uint64_t seed);

struct OracleLimits {
  std::size_t max_flexible = 8;
  std::size_t max_datacenters = 4;
};

/// Exhaustive search over all flexible assignments; ties go to the
/// lexicographically smallest particle. Throws ConfigError above the limits.
StrategyResult brute_force_optimal(const Workflow& w, const Environment& env,
                                   OracleLimits limits = {});

/// Uniform random flexible positions, decoded.
StrategyResult run_random(const Workflow& w, const Environment& env, std::uint64_t seed);

} // namespace edgeplace
