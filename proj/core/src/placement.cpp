#include <edgeplace/placement.hpp>

#include <algorithm>

namespace edgeplace {

Particle particle_from_one_based(std::initializer_list<int> numbers) {
  Particle p;
  for (int n : numbers) {
    if (n < 1) throw ConfigError("one-based datacenter numbers start at 1");
    p.positions.push_back(dc_id(static_cast<std::size_t>(n - 1)));
  }
  return p;
}

std::weak_ordering fitness_compare(const Fitness& a, const Fitness& b) noexcept {
  if (a.feasible != b.feasible)
    return a.feasible ? std::weak_ordering::less : std::weak_ordering::greater;
  if (a.total_time_s < b.total_time_s) return std::weak_ordering::less;
  if (b.total_time_s < a.total_time_s) return std::weak_ordering::greater;
  return std::weak_ordering::equivalent;
}

double transfer_time(Bytes size, DatacenterId src, DatacenterId dst, const Environment& env) {
  if (src == dst || size == 0) return 0.0;
  return static_cast<double>(size) / env.bandwidth(src, dst);
}

bool check_feasibility(const PlacementOutcome& outcome, const Environment& env) {
  const std::size_t n = std::min(outcome.usage.size(), env.size());
  for (std::size_t i = 0; i < n; ++i) {
    const Datacenter& dc = env.datacenters()[i];
    if (!dc.is_edge()) continue;
    Bytes demand = outcome.usage[i];
    if (i < outcome.peak.size()) demand = std::max(demand, outcome.peak[i]);
    if (!dc.capacity.admits(demand)) return false;
  }
  return true;
}

Decoder::Decoder(const Workflow& w, const Environment& env, std::vector<TaskId> order)
    : workflow_(&w), env_(&env), order_(std::move(order)) {
  if (!is_topological_order(w, order_))
    throw ConfigError("task order is not a topological order of the workflow");
  for (const auto& ds : w.datasets())
    if (ds.source.is_initial()) initial_.push_back(ds.id);
}

Decoder::Decoder(const Workflow& w, const Environment& env)
    : Decoder(w, env, topological_order(w)) {}

void Decoder::check_particle(const Particle& p) const {
  if (p.size() != workflow_->dataset_count())
    throw ConfigError("particle has " + std::to_string(p.size()) + " positions, workflow has " +
                      std::to_string(workflow_->dataset_count()) + " datasets");
  for (DatacenterId dc : p.positions)
    if (index(dc) >= env_->size())
      throw ConfigError("particle references missing datacenter " + std::to_string(index(dc)));
}

namespace {

struct DecodeState {
  std::vector<Bytes> usage;
  std::vector<Bytes> peak;
  double total = 0.0;

  explicit DecodeState(std::size_t n) : usage(n, 0), peak(n, 0) {}

  void store(DatacenterId dc, Bytes size) {
    auto& u = usage[index(dc)];
    u += size;
    peak[index(dc)] = std::max(peak[index(dc)], u);
  }
};

struct NullSink {
  void task(TaskId, DatacenterId) {}
  void transfer(const Transfer&) {}
};

struct RecordingSink {
  PlacementOutcome* out;
  void task(TaskId t, DatacenterId dc) { out->task_dc[index(t)] = dc; }
  void transfer(const Transfer& tr) { out->transfers.push_back(tr); }
};

} // namespace

template <class Sink>
void Decoder::run(const Particle& p, Sink& sink) const {
  check_particle(p);
  const Workflow& w = *workflow_;
  const Environment& env = *env_;
  const std::size_t n_dc = env.size();
  DecodeState state(n_dc);

  for (DatasetId d : initial_) state.store(p[index(d)], w.dataset(d).size);

  std::vector<double> cost(n_dc);
  for (TaskId t : order_) {
    const Task& task = w.task(t);
    std::fill(cost.begin(), cost.end(), 0.0);
    for (DatasetId d : task.inputs) {
      const Bytes size = w.dataset(d).size;
      const DatacenterId src = p[index(d)];
      for (std::size_t c = 0; c < n_dc; ++c) cost[c] += transfer_time(size, src, dc_id(c), env);
    }
    const std::size_t best =
        static_cast<std::size_t>(std::min_element(cost.begin(), cost.end()) - cost.begin());
    const DatacenterId dc = dc_id(best);
    sink.task(t, dc);

    Bytes demand = state.usage[best];
    for (DatasetId d : task.inputs) {
      const DatacenterId src = p[index(d)];
      if (src == dc) continue;
      const Bytes size = w.dataset(d).size;
      demand += size;
      const double seconds = transfer_time(size, src, dc, env);
      state.total += seconds;
      sink.transfer({src, d, dc, seconds});
    }
    for (DatasetId d : task.outputs) demand += w.dataset(d).size;
    state.peak[best] = std::max(state.peak[best], demand);

    for (DatasetId d : task.outputs) state.store(p[index(d)], w.dataset(d).size);
  }

  sink.finish(std::move(state));
}

PlacementOutcome Decoder::decode(const Particle& p) const {
  PlacementOutcome out;
  out.task_dc.assign(workflow_->task_count(), dc_id(0));
  struct Sink : RecordingSink {
    const Environment* env;
    void finish(DecodeState&& s) {
      out->total_time_s = s.total;
      out->overload = 0;
      for (std::size_t i = 0; i < s.peak.size(); ++i)
        if (env->datacenters()[i].is_edge())
          out->overload += env->datacenters()[i].capacity.excess(s.peak[i]);
      out->feasible = out->overload == 0;
      out->usage = std::move(s.usage);
      out->peak = std::move(s.peak);
    }
  } sink{{&out}, env_};
  run(p, sink);
  return out;
}

Evaluation Decoder::evaluate(const Particle& p) const {
  Evaluation out;
  struct Sink : NullSink {
    const Environment* env;
    Evaluation* out;
    void finish(DecodeState&& s) {
      out->fitness.total_time_s = s.total;
      out->fitness.feasible = true;
      for (std::size_t i = 0; i < s.peak.size(); ++i) {
        const Datacenter& dc = env->datacenters()[i];
        if (!dc.is_edge() || dc.capacity.admits(s.peak[i])) continue;
        if (out->overloaded.empty()) out->overloaded.assign(s.peak.size(), false);
        out->overloaded[i] = true;
        out->fitness.feasible = false;
      }
    }
  } sink{{}, env_, &out};
  run(p, sink);
  return out;
}

PlacementOutcome decode_particle(const Particle& p, const Workflow& w, const Environment& env,
                                 const std::vector<TaskId>& order) {
  return Decoder(w, env, order).decode(p);
}

bool respects_fixed_positions(const Particle& p, const Workflow& w) {
  if (p.size() != w.dataset_count()) return false;
  for (const auto& ds : w.datasets())
    if (ds.placement.fixed_dc && p[index(ds.id)] != *ds.placement.fixed_dc) return false;
  return true;
}

} // namespace edgeplace
