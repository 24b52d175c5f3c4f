#pragma once

#include <edgeplace/types.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace edgeplace {

/// Where a dataset comes from: a workflow input, or the output of one task.
struct DatasetSource {
  std::optional<TaskId> generator; ///< empty for initial datasets

  static DatasetSource initial() { return {}; }
  static DatasetSource generated(TaskId t) { return {t}; }
  bool is_initial() const noexcept { return !generator.has_value(); }
  friend bool operator==(const DatasetSource&, const DatasetSource&) = default;
};

/// Storage constraint of a dataset: optimizer-placed, or pinned to an edge datacenter.
struct PlacementClass {
  std::optional<DatacenterId> fixed_dc; ///< set for private datasets

  static PlacementClass flexible() { return {}; }
  static PlacementClass fixed(DatacenterId dc) { return {dc}; }
  bool is_fixed() const noexcept { return fixed_dc.has_value(); }
  friend bool operator==(const PlacementClass&, const PlacementClass&) = default;
};

struct Dataset {
  DatasetId id{};
  std::string name;
  Bytes size = 0;
  DatasetSource source;
  PlacementClass placement;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

struct Task {
  TaskId id{};
  std::string name;
  std::vector<DatasetId> inputs;  ///< sorted ascending
  std::vector<DatasetId> outputs; ///< sorted ascending

  friend bool operator==(const Task&, const Task&) = default;
};

/// A workflow DAG G = (tasks, edges, datasets). Edges are derived from shared
/// datasets: t_i -> t_j when t_i produces a dataset that t_j consumes.
///
/// Immutable after construction. The constructor does not validate; use
/// validate_workflow() for that. Derived lookups tolerate dangling ids.
class Workflow {
public:
  Workflow() = default;
  Workflow(std::vector<Task> tasks, std::vector<Dataset> datasets);

  const std::vector<Task>& tasks() const noexcept { return tasks_; }
  const std::vector<Dataset>& datasets() const noexcept { return datasets_; }
  const Task& task(TaskId id) const { return tasks_.at(index(id)); }
  const Dataset& dataset(DatasetId id) const { return datasets_.at(index(id)); }
  std::size_t task_count() const noexcept { return tasks_.size(); }
  std::size_t dataset_count() const noexcept { return datasets_.size(); }

  /// Tasks listing the dataset among their outputs.
  const std::vector<TaskId>& producers(DatasetId id) const { return producers_.at(index(id)); }
  /// Tasks listing the dataset among their inputs.
  const std::vector<TaskId>& consumers(DatasetId id) const { return consumers_.at(index(id)); }
  /// Data-dependency edges, sorted and unique.
  const std::vector<std::pair<TaskId, TaskId>>& edges() const noexcept { return edges_; }

  Bytes total_size() const noexcept;

  friend bool operator==(const Workflow& a, const Workflow& b) {
    return a.tasks_ == b.tasks_ && a.datasets_ == b.datasets_;
  }

private:
  std::vector<Task> tasks_;
  std::vector<Dataset> datasets_;
  std::vector<std::vector<TaskId>> producers_;
  std::vector<std::vector<TaskId>> consumers_;
  std::vector<std::pair<TaskId, TaskId>> edges_;
};

enum class ViolationKind {
  NonDenseId,
  DanglingDataset,
  DanglingGenerator,
  InputOutputOverlap,
  MultiProducer,
  GeneratorMismatch,
  Cycle,
  FixedOnCloud,
  FixedUnknownDatacenter,
};

struct Violation {
  ViolationKind kind;
  std::string message;
};

std::string to_string(ViolationKind kind);

class Environment;

/// Every structural invariant violation; empty means valid.
std::vector<Violation> validate_workflow(const Workflow& w);
/// Structural checks plus private-dataset checks against a topology.
std::vector<Violation> validate_workflow(const Workflow& w, const Environment& env);

struct DatasetPartition {
  std::vector<DatasetId> initial;
  std::vector<DatasetId> generated;
};

DatasetPartition classify_datasets(const Workflow& w);

/// Kahn's algorithm, ready tasks taken in ascending id. Throws DataError on a cycle.
std::vector<TaskId> topological_order(const Workflow& w);

/// True when `order` is a permutation of all tasks that respects every edge.
bool is_topological_order(const Workflow& w, const std::vector<TaskId>& order);

/// Pins floor(ratio * |DS|) datasets, chosen uniformly at random, each to a
/// uniformly chosen datacenter from `edge_dcs`. Deterministic in `seed`.
Workflow assign_private_datasets(const Workflow& w, double ratio,
                                 const std::vector<DatacenterId>& edge_dcs,
                                 std::uint64_t seed);

struct SizeRange {
  Bytes min = kGigabyte;
  Bytes max = 8 * kGigabyte;
};

/// Random acyclic workflow for tests and oracle comparisons.
Workflow generate_synthetic_workflow(std::size_t n_tasks, std::size_t n_datasets,
                                     SizeRange sizes, std::uint64_t seed);

} // namespace edgeplace
