#include <edgeplace/preprocess.hpp>

#include <algorithm>
#include <optional>

namespace edgeplace {

std::vector<std::pair<DatasetId, DatasetId>> find_cut_edge_pairs(const Workflow& w) {
  std::vector<std::pair<DatasetId, DatasetId>> pairs;
  std::vector<bool> taken(w.dataset_count(), false);
  for (std::size_t a = 0; a < w.dataset_count(); ++a) {
    if (taken[a]) continue;
    const auto& consumers = w.consumers(dataset_id(a));
    std::optional<TaskId> bridge;
    bool dead_end_others = true;
    for (TaskId t : consumers) {
      const Task& task = w.task(t);
      if (task.outputs.empty()) continue;
      if (bridge) {
        dead_end_others = false;
        break;
      }
      bridge = t;
    }
    if (!bridge || !dead_end_others) continue;
    const Task& task = w.task(*bridge);
    if (task.inputs.size() != 1 || task.outputs.size() != 1) continue;
    const std::size_t b = index(task.outputs.front());
    if (taken[b] || w.producers(dataset_id(b)).size() != 1) continue;
    if (w.datasets()[a].placement.is_fixed() && w.datasets()[b].placement.is_fixed()) continue;
    taken[a] = taken[b] = true;
    pairs.emplace_back(dataset_id(a), dataset_id(b));
  }
  return pairs;
}

namespace {

DatasetId remap(DatasetId d, const std::vector<DatasetId>& to) { return to[index(d)]; }

/// Applies one pass of merges. `constituents` tracks original ids per current dataset.
Workflow merge_pass(const Workflow& w, const std::vector<std::pair<DatasetId, DatasetId>>& pairs,
                    std::vector<std::vector<DatasetId>>& constituents) {
  const std::size_t n = w.dataset_count();
  std::vector<std::size_t> absorbed_into(n, n);
  for (const auto& [a, b] : pairs) absorbed_into[index(b)] = index(a);

  std::vector<DatasetId> new_id(n);
  std::vector<Dataset> datasets;
  std::vector<std::vector<DatasetId>> next_constituents;
  for (std::size_t d = 0; d < n; ++d) {
    if (absorbed_into[d] != n) continue;
    new_id[d] = dataset_id(datasets.size());
    datasets.push_back(w.datasets()[d]);
    datasets.back().id = new_id[d];
    next_constituents.push_back(constituents[d]);
  }
  for (const auto& [a, b] : pairs) {
    new_id[index(b)] = new_id[index(a)];
    Dataset& m = datasets[index(new_id[index(a)])];
    const Dataset& db = w.datasets()[index(b)];
    m.name += "+" + db.name;
    m.size += db.size;
    if (!m.placement.is_fixed()) m.placement = db.placement;
    auto& merged = next_constituents[index(new_id[index(a)])];
    merged.insert(merged.end(), constituents[index(b)].begin(), constituents[index(b)].end());
  }

  std::vector<Task> tasks = w.tasks();
  for (auto& t : tasks) {
    for (auto& d : t.inputs) d = remap(d, new_id);
    for (auto& d : t.outputs) d = remap(d, new_id);
    std::sort(t.inputs.begin(), t.inputs.end());
    t.inputs.erase(std::unique(t.inputs.begin(), t.inputs.end()), t.inputs.end());
    // The bridging task now consumes the merged dataset instead of producing it.
    std::erase_if(t.outputs, [&](DatasetId d) {
      return std::binary_search(t.inputs.begin(), t.inputs.end(), d);
    });
  }
  constituents = std::move(next_constituents);
  return Workflow(std::move(tasks), std::move(datasets));
}

} // namespace

MergePlan preprocess_workflow(const Workflow& w) {
  std::vector<std::vector<DatasetId>> constituents(w.dataset_count());
  for (std::size_t d = 0; d < w.dataset_count(); ++d) constituents[d] = {dataset_id(d)};

  Workflow current = w;
  for (auto pairs = find_cut_edge_pairs(current); !pairs.empty();
       pairs = find_cut_edge_pairs(current))
    current = merge_pass(current, pairs, constituents);

  MergePlan plan;
  plan.compressed_of.resize(w.dataset_count());
  for (std::size_t c = 0; c < constituents.size(); ++c) {
    for (DatasetId original : constituents[c]) plan.compressed_of[index(original)] = dataset_id(c);
    if (constituents[c].size() > 1) plan.merges.push_back({dataset_id(c), constituents[c]});
  }
  plan.compressed = std::move(current);
  return plan;
}

std::map<DatasetId, DatacenterId> expand_placement(
    const MergePlan& plan, const std::map<DatasetId, DatacenterId>& compressed_placement) {
  std::map<DatasetId, DatacenterId> out;
  for (std::size_t d = 0; d < plan.original_count(); ++d) {
    const DatasetId c = plan.compressed_of[d];
    const auto it = compressed_placement.find(c);
    if (it == compressed_placement.end())
      throw ConfigError("placement is missing compressed dataset " + std::to_string(index(c)));
    out.emplace(dataset_id(d), it->second);
  }
  return out;
}

std::vector<DatacenterId> expand_positions(const MergePlan& plan,
                                           const std::vector<DatacenterId>& compressed) {
  if (compressed.size() != plan.compressed.dataset_count())
    throw ConfigError("compressed placement has " + std::to_string(compressed.size()) +
                      " entries, expected " + std::to_string(plan.compressed.dataset_count()));
  std::vector<DatacenterId> out(plan.original_count());
  for (std::size_t d = 0; d < out.size(); ++d) out[d] = compressed[index(plan.compressed_of[d])];
  return out;
}

} // namespace edgeplace
