#pragma once

#include <edgeplace/placement.hpp>
#include <edgeplace/rng.hpp>

#include <cstdint>
#include <vector>

namespace edgeplace {

enum class InertiaMode { Adaptive, Linear };

struct SwarmConfig {
  std::size_t population = 100;
  std::size_t max_iterations = 1000;
  std::size_t stall_window = 80;
  double w_max = 0.9;
  double w_min = 0.4;
  double c1_start = 0.9;
  double c1_end = 0.2;
  double c2_start = 0.9;
  double c2_end = 0.4;
  /// Offset in the adaptive inertia exponent d / (d - offset); must exceed 1.
  double divergence_offset = 1.01;
  InertiaMode inertia_mode = InertiaMode::Adaptive;
  /// false runs the search on the uncompressed workflow (NGA-DPSO).
  bool preprocessing_enabled = true;
  std::uint64_t seed = 0;
  /// Worker threads for particle evaluation; results do not depend on it.
  std::size_t threads = 1;

  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

/// Summary of one search run.
struct RunStats {
  double best_time_s = 0.0;
  bool feasible = true;
  std::size_t iterations_to_best = 0;
  std::size_t iterations_total = 0;
  double wall_ms = 0.0;
  std::uint64_t seed = 0;

  friend bool operator==(const RunStats&, const RunStats&) = default;
};

/// Positions an operator may change, and the datacenter range.
class SearchSpace {
public:
  SearchSpace(const Workflow& w, const Environment& env);

  std::size_t dimension() const noexcept { return fixed_.size(); }
  std::size_t datacenter_count() const noexcept { return dc_count_; }
  const std::vector<std::size_t>& flexible_positions() const noexcept { return flexible_; }
  /// Pinned datacenter per position, for fixed datasets.
  const std::vector<std::optional<DatacenterId>>& fixed() const noexcept { return fixed_; }

  /// Fixed positions pinned, flexible positions uniform over all datacenters.
  Particle random_particle(Rng& rng) const;
  bool contains(const Particle& p) const noexcept;

private:
  std::size_t dc_count_;
  std::vector<std::size_t> flexible_;
  std::vector<std::optional<DatacenterId>> fixed_;
};

/// Hamming distance between particles divided by their dimension.
double divergence(const Particle& x, const Particle& gbest);

/// w_max - (w_max - w_min) * exp(d / (d - offset)).
double adaptive_inertia_weight(double d, const SwarmConfig& cfg);
/// w_max - iter * (w_max - w_min) / max_iterations.
double linear_inertia_weight(std::size_t iter, const SwarmConfig& cfg);
/// start - (start - end) * iter / max_iter.
double acceleration_coefficient(std::size_t iter, double start, double end, std::size_t max_iter);

/// Indexes the mutation operator chooses from: every flexible position when
/// the particle is feasible; otherwise the flexible positions currently
/// mapped to an overloaded datacenter (all flexible positions if none are).
std::vector<std::size_t> mutation_candidates(const Particle& x, const SearchSpace& space,
                                             const Evaluation& current);

/// With probability w, redraws one candidate index uniformly over all datacenters.
Particle mutate_particle(const Particle& x, double w, const SearchSpace& space,
                         const Evaluation& current, Rng& rng);

/// Copies guide[first..last] (inclusive) into x.
Particle crossover_segment(const Particle& x, const Particle& guide, std::size_t first,
                           std::size_t last);

/// With probability c, copies a uniformly drawn segment of the guide into x.
Particle crossover_particle(const Particle& x, const Particle& guide, double c, Rng& rng);

struct OperatorStreams {
  Rng mutation;
  Rng personal;
  Rng global;

  static OperatorStreams keyed(std::uint64_t seed, std::uint64_t iteration,
                               std::uint64_t particle) noexcept;
};

/// Mutation, then personal-best crossover, then global-best crossover, each gated independently.
Particle update_particle(const Particle& x, const Particle& pbest, const Particle& gbest,
                         double w, double c1, double c2, const SearchSpace& space,
                         const Evaluation& current, OperatorStreams& streams);

struct SearchResult {
  Particle best;             ///< over the original datasets
  PlacementOutcome outcome;  ///< decoded on the original workflow
  RunStats stats;
  std::vector<Fitness> history; ///< global best after initialization and after each iteration
  std::size_t search_dimension = 0;
};

/// Runs the GA-DPSO search. With preprocessing enabled, particle positions
/// range over the compressed datasets; every particle is expanded to the
/// original datasets and decoded on `w`, so fitness is always the true objective.
SearchResult run_gadpso(const Workflow& w, const Environment& env, const SwarmConfig& cfg);

} // namespace edgeplace
