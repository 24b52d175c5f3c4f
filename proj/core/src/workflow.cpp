#include <edgeplace/environment.hpp>
#include <edgeplace/rng.hpp>
#include <edgeplace/workflow.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>
#include <sstream>

namespace edgeplace {

namespace {

void sort_unique(std::vector<DatasetId>& ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
}

std::string task_label(const Workflow& w, std::size_t t) {
  std::ostringstream os;
  os << "task " << t;
  if (t < w.task_count() && !w.tasks()[t].name.empty()) os << " (" << w.tasks()[t].name << ")";
  return os.str();
}

std::string dataset_label(const Workflow& w, std::size_t d) {
  std::ostringstream os;
  os << "dataset " << d;
  if (d < w.dataset_count() && !w.datasets()[d].name.empty())
    os << " (" << w.datasets()[d].name << ")";
  return os.str();
}

/// Kahn's algorithm over data edges; returns the order (shorter than |T| on a cycle).
std::vector<TaskId> kahn(const Workflow& w) {
  const std::size_t n = w.task_count();
  std::vector<std::size_t> indegree(n, 0);
  std::vector<std::vector<std::size_t>> successors(n);
  for (const auto& [from, to] : w.edges()) {
    successors[index(from)].push_back(index(to));
    ++indegree[index(to)];
  }
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t t = 0; t < n; ++t)
    if (indegree[t] == 0) ready.push(t);
  std::vector<TaskId> order;
  order.reserve(n);
  while (!ready.empty()) {
    const std::size_t t = ready.top();
    ready.pop();
    order.push_back(task_id(t));
    for (std::size_t s : successors[t])
      if (--indegree[s] == 0) ready.push(s);
  }
  return order;
}

} // namespace

Workflow::Workflow(std::vector<Task> tasks, std::vector<Dataset> datasets)
    : tasks_(std::move(tasks)), datasets_(std::move(datasets)) {
  for (auto& t : tasks_) {
    sort_unique(t.inputs);
    sort_unique(t.outputs);
  }
  producers_.resize(datasets_.size());
  consumers_.resize(datasets_.size());
  for (std::size_t t = 0; t < tasks_.size(); ++t) {
    for (DatasetId d : tasks_[t].inputs)
      if (index(d) < datasets_.size()) consumers_[index(d)].push_back(task_id(t));
    for (DatasetId d : tasks_[t].outputs)
      if (index(d) < datasets_.size()) producers_[index(d)].push_back(task_id(t));
  }
  for (std::size_t d = 0; d < datasets_.size(); ++d)
    for (TaskId p : producers_[d])
      for (TaskId c : consumers_[d])
        if (p != c) edges_.emplace_back(p, c);
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

Bytes Workflow::total_size() const noexcept {
  Bytes total = 0;
  for (const auto& d : datasets_) total += d.size;
  return total;
}

std::string to_string(ViolationKind kind) {
  switch (kind) {
  case ViolationKind::NonDenseId: return "non-dense-id";
  case ViolationKind::DanglingDataset: return "dangling-dataset";
  case ViolationKind::DanglingGenerator: return "dangling-generator";
  case ViolationKind::InputOutputOverlap: return "input-output-overlap";
  case ViolationKind::MultiProducer: return "multi-producer";
  case ViolationKind::GeneratorMismatch: return "generator-mismatch";
  case ViolationKind::Cycle: return "cycle";
  case ViolationKind::FixedOnCloud: return "fixed-on-cloud";
  case ViolationKind::FixedUnknownDatacenter: return "fixed-unknown-datacenter";
  }
  return "unknown";
}

std::vector<Violation> validate_workflow(const Workflow& w) {
  std::vector<Violation> out;
  auto report = [&out](ViolationKind kind, std::string message) {
    out.push_back({kind, std::move(message)});
  };
  const std::size_t n_tasks = w.task_count();
  const std::size_t n_data = w.dataset_count();

  for (std::size_t t = 0; t < n_tasks; ++t)
    if (index(w.tasks()[t].id) != t)
      report(ViolationKind::NonDenseId, task_label(w, t) + " carries id " +
                                            std::to_string(index(w.tasks()[t].id)));
  for (std::size_t d = 0; d < n_data; ++d)
    if (index(w.datasets()[d].id) != d)
      report(ViolationKind::NonDenseId, dataset_label(w, d) + " carries id " +
                                            std::to_string(index(w.datasets()[d].id)));

  for (std::size_t t = 0; t < n_tasks; ++t) {
    const Task& task = w.tasks()[t];
    for (const auto* list : {&task.inputs, &task.outputs})
      for (DatasetId d : *list)
        if (index(d) >= n_data)
          report(ViolationKind::DanglingDataset,
                 task_label(w, t) + " references missing dataset " + std::to_string(index(d)));
    std::vector<DatasetId> both;
    std::set_intersection(task.inputs.begin(), task.inputs.end(), task.outputs.begin(),
                          task.outputs.end(), std::back_inserter(both));
    for (DatasetId d : both)
      report(ViolationKind::InputOutputOverlap,
             task_label(w, t) + " both consumes and produces " + dataset_label(w, index(d)));
  }

  for (std::size_t d = 0; d < n_data; ++d) {
    const Dataset& ds = w.datasets()[d];
    const auto& producers = w.producers(dataset_id(d));
    if (producers.size() > 1)
      report(ViolationKind::MultiProducer,
             dataset_label(w, d) + " is output by " + std::to_string(producers.size()) + " tasks");
    if (ds.source.generator) {
      const std::size_t g = index(*ds.source.generator);
      if (g >= n_tasks) {
        report(ViolationKind::DanglingGenerator,
               dataset_label(w, d) + " names missing generator task " + std::to_string(g));
      } else if (std::find(producers.begin(), producers.end(), *ds.source.generator) ==
                 producers.end()) {
        report(ViolationKind::GeneratorMismatch,
               dataset_label(w, d) + " names " + task_label(w, g) + " which does not output it");
      }
    } else if (!producers.empty()) {
      report(ViolationKind::GeneratorMismatch,
             dataset_label(w, d) + " is marked initial but is output by " +
                 task_label(w, index(producers.front())));
    }
  }

  if (kahn(w).size() != n_tasks)
    report(ViolationKind::Cycle, "task dependency graph contains a cycle");
  return out;
}

std::vector<Violation> validate_workflow(const Workflow& w, const Environment& env) {
  auto out = validate_workflow(w);
  for (const auto& ds : w.datasets()) {
    if (!ds.placement.fixed_dc) continue;
    const std::size_t dc = index(*ds.placement.fixed_dc);
    if (dc >= env.size()) {
      out.push_back({ViolationKind::FixedUnknownDatacenter,
                     dataset_label(w, index(ds.id)) + " is pinned to missing datacenter " +
                         std::to_string(dc)});
    } else if (!env.datacenters()[dc].is_edge()) {
      out.push_back({ViolationKind::FixedOnCloud, dataset_label(w, index(ds.id)) +
                                                      " is pinned to cloud datacenter " +
                                                      std::to_string(dc)});
    }
  }
  return out;
}

DatasetPartition classify_datasets(const Workflow& w) {
  DatasetPartition p;
  for (const auto& ds : w.datasets())
    (ds.source.is_initial() ? p.initial : p.generated).push_back(ds.id);
  return p;
}

std::vector<TaskId> topological_order(const Workflow& w) {
  auto order = kahn(w);
  if (order.size() != w.task_count())
    throw DataError("workflow contains a dependency cycle");
  return order;
}

bool is_topological_order(const Workflow& w, const std::vector<TaskId>& order) {
  const std::size_t n = w.task_count();
  if (order.size() != n) return false;
  std::vector<std::size_t> position(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t t = index(order[i]);
    if (t >= n || position[t] != n) return false;
    position[t] = i;
  }
  return std::all_of(w.edges().begin(), w.edges().end(), [&](const auto& e) {
    return position[index(e.first)] < position[index(e.second)];
  });
}

Workflow assign_private_datasets(const Workflow& w, double ratio,
                                 const std::vector<DatacenterId>& edge_dcs, std::uint64_t seed) {
  if (!(ratio >= 0.0 && ratio <= 1.0))
    throw ConfigError("private ratio must lie in [0, 1]");
  const std::size_t n = w.dataset_count();
  // The epsilon keeps products such as 0.29 * 100 from flooring one short.
  const auto count = std::min(n, static_cast<std::size_t>(std::floor(ratio * n + 1e-9)));
  if (count == 0) return w;
  if (edge_dcs.empty()) throw ConfigError("private datasets need at least one edge datacenter");
  if (std::any_of(w.datasets().begin(), w.datasets().end(),
                  [](const Dataset& d) { return d.placement.is_fixed(); }))
    throw ConfigError("workflow already has private datasets");

  Rng rng = Rng::stream(seed, 0, 0, 0x50524956); // "PRIV"
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  std::vector<Dataset> datasets = w.datasets();
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + rng.below(n - i);
    std::swap(pool[i], pool[j]);
    datasets[pool[i]].placement = PlacementClass::fixed(edge_dcs[rng.below(edge_dcs.size())]);
  }
  return Workflow(w.tasks(), std::move(datasets));
}

Workflow generate_synthetic_workflow(std::size_t n_tasks, std::size_t n_datasets, SizeRange sizes,
                                     std::uint64_t seed) {
  if (n_tasks == 0 || n_datasets == 0)
    throw ConfigError("synthetic workflow needs at least one task and one dataset");
  if (sizes.min > sizes.max) throw ConfigError("synthetic size range is empty");

  Rng rng = Rng::stream(seed, 0, 0, 0x53594E54); // "SYNT"
  std::vector<Task> tasks(n_tasks);
  std::vector<Dataset> datasets(n_datasets);
  for (std::size_t t = 0; t < n_tasks; ++t) {
    tasks[t].id = task_id(t);
    tasks[t].name = "t" + std::to_string(t);
  }
  std::vector<std::size_t> initial;
  auto add_consumer = [&](std::size_t d, std::optional<std::size_t> producer) {
    const std::size_t first = producer ? *producer + 1 : 0;
    const std::size_t c = first + rng.below(n_tasks - first);
    tasks[c].inputs.push_back(dataset_id(d));
  };
  for (std::size_t d = 0; d < n_datasets; ++d) {
    Dataset& ds = datasets[d];
    ds.id = dataset_id(d);
    ds.name = "ds" + std::to_string(d);
    ds.size = sizes.min + static_cast<Bytes>(rng.below(static_cast<std::size_t>(sizes.max - sizes.min) + 1));
    std::optional<std::size_t> producer;
    if (d > 0 && n_tasks > 1 && rng.uniform01() < 0.5) producer = rng.below(n_tasks - 1);
    if (producer) {
      ds.source = DatasetSource::generated(task_id(*producer));
      tasks[*producer].outputs.push_back(ds.id);
    } else {
      initial.push_back(d);
    }
    add_consumer(d, producer);
    if (rng.uniform01() < 0.3) add_consumer(d, producer);
  }
  for (auto& t : tasks)
    if (t.inputs.empty()) t.inputs.push_back(dataset_id(initial[rng.below(initial.size())]));
  return Workflow(std::move(tasks), std::move(datasets));
}

} // namespace edgeplace
