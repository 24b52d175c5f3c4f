#pragma once

#include <edgeplace/workflow.hpp>

#include <map>
#include <utility>
#include <vector>

namespace edgeplace {

/// One merged dataset of the compressed workflow and the original datasets it holds.
struct Merge {
  DatasetId merged_id{};                    ///< id in the compressed workflow
  std::vector<DatasetId> constituents;      ///< original ids, in data-flow order

  friend bool operator==(const Merge&, const Merge&) = default;
};

struct MergePlan {
  std::vector<Merge> merges;            ///< only datasets with two or more constituents
  std::vector<DatasetId> compressed_of; ///< original id -> compressed id
  Workflow compressed;

  std::size_t original_count() const noexcept { return compressed_of.size(); }
};

/// Cut-edge dataset pairs (input, output) merged by one pass.
///
/// A pair (a, b) qualifies when a single task t consumes a and produces b,
/// t has no other input and no other output, every other consumer of a
/// produces nothing (so a feeds only b), and at least one of the two is
/// flexible. Pairs are taken greedily by ascending input id; a dataset joins
/// at most one pair per pass.
std::vector<std::pair<DatasetId, DatasetId>> find_cut_edge_pairs(const Workflow& w);

/// Repeats cut-edge merging until no pair remains.
MergePlan preprocess_workflow(const Workflow& w);

/// Maps a placement over compressed datasets back to the original datasets.
/// Throws ConfigError when a compressed dataset is missing from the map.
std::map<DatasetId, DatacenterId> expand_placement(
    const MergePlan& plan, const std::map<DatasetId, DatacenterId>& compressed_placement);

/// Vector form of expand_placement: positions indexed by compressed dataset id.
std::vector<DatacenterId> expand_positions(const MergePlan& plan,
                                           const std::vector<DatacenterId>& compressed);

} // namespace edgeplace
