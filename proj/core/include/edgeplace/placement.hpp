#pragma once

#include <edgeplace/environment.hpp>
#include <edgeplace/workflow.hpp>

#include <compare>
#include <vector>

namespace edgeplace {

/// Encoded placement: one datacenter per dataset.
struct Particle {
  std::vector<DatacenterId> positions;

  std::size_t size() const noexcept { return positions.size(); }
  DatacenterId operator[](std::size_t k) const { return positions[k]; }
  DatacenterId& operator[](std::size_t k) { return positions[k]; }

  friend bool operator==(const Particle&, const Particle&) = default;
  friend auto operator<=>(const Particle&, const Particle&) = default;
};

/// Builds a particle from 1-based datacenter numbers, as written in worked examples.
Particle particle_from_one_based(std::initializer_list<int> numbers);

struct Transfer {
  DatacenterId src{};
  DatasetId dataset{};
  DatacenterId dst{};
  double seconds = 0.0;

  friend bool operator==(const Transfer&, const Transfer&) = default;
};

/// Comparable summary of a decoded particle.
struct Fitness {
  bool feasible = true;
  double total_time_s = 0.0;

  friend bool operator==(const Fitness&, const Fitness&) = default;
};

/// Feasible beats infeasible; within a class, smaller total time wins; exact ties are equal.
std::weak_ordering fitness_compare(const Fitness& a, const Fitness& b) noexcept;

struct PlacementOutcome {
  bool feasible = true;
  double total_time_s = 0.0;
  std::vector<DatacenterId> task_dc; ///< indexed by task id
  std::vector<Transfer> transfers;   ///< input transfers, in task order
  std::vector<Bytes> usage;          ///< stored bytes per datacenter after placement
  std::vector<Bytes> peak;           ///< highest demand seen per datacenter, incl. in-flight inputs
  Bytes overload = 0;                ///< sum over edge datacenters of peak bytes above capacity

  Fitness fitness() const noexcept { return {feasible, total_time_s}; }
};

inline std::weak_ordering fitness_compare(const PlacementOutcome& a,
                                          const PlacementOutcome& b) noexcept {
  return fitness_compare(a.fitness(), b.fitness());
}

/// size / bandwidth(src, dst); 0 when src == dst.
double transfer_time(Bytes size, DatacenterId src, DatacenterId dst, const Environment& env);

/// True iff no edge datacenter holds (or at any point held) more than its capacity.
bool check_feasibility(const PlacementOutcome& outcome, const Environment& env);

/// Lightweight decode result used inside search loops.
struct Evaluation {
  Fitness fitness;
  std::vector<bool> overloaded; ///< per datacenter; empty when feasible
};

/// Maps particles to placements for one (workflow, environment, task order).
///
/// Decoding:
///  1. initial datasets are stored at their encoded datacenters;
///  2. tasks run in the given order, each at the datacenter minimizing the
///     summed transfer time of its inputs (ties -> lowest id); the chosen
///     datacenter must hold its current contents plus the inputs arriving
///     from elsewhere plus the task's outputs;
///  3. each task's outputs are then stored at their encoded datacenters;
///  4. total time is the sum of input transfer times.
/// Capacity violations mark the particle infeasible but decoding continues,
/// so infeasible particles still carry a transfer time.
///
/// Holds references; the workflow and environment must outlive the decoder.
class Decoder {
public:
  /// Throws ConfigError if `order` is not a topological order of `w`.
  Decoder(const Workflow& w, const Environment& env, std::vector<TaskId> order);
  /// Uses topological_order(w).
  Decoder(const Workflow& w, const Environment& env);

  PlacementOutcome decode(const Particle& p) const;
  Evaluation evaluate(const Particle& p) const;

  const Workflow& workflow() const noexcept { return *workflow_; }
  const Environment& environment() const noexcept { return *env_; }
  const std::vector<TaskId>& order() const noexcept { return order_; }

private:
  template <class Sink>
  void run(const Particle& p, Sink& sink) const;
  void check_particle(const Particle& p) const;

  const Workflow* workflow_;
  const Environment* env_;
  std::vector<TaskId> order_;
  std::vector<DatasetId> initial_;
};

PlacementOutcome decode_particle(const Particle& p, const Workflow& w, const Environment& env,
                                 const std::vector<TaskId>& order);

/// True when every fixed dataset sits at its pinned datacenter.
bool respects_fixed_positions(const Particle& p, const Workflow& w);

} // namespace edgeplace
