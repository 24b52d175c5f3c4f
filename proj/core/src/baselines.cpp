#include "instance.hpp"
#include "parallel.hpp"

#include <edgeplace/baselines.hpp>

#include <algorithm>
#include <chrono>
#include <limits>
#include <numeric>

namespace edgeplace {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::size_t shared_consumers(const Workflow& w, DatasetId a, DatasetId b) {
  const auto& ca = w.consumers(a);
  const auto& cb = w.consumers(b);
  std::size_t count = 0;
  auto i = ca.begin();
  auto j = cb.begin();
  while (i != ca.end() && j != cb.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

double dependency_from_count(std::size_t count, DatasetId a, DatasetId b, const Workflow& w,
                             const Environment& env,
                             const std::vector<DatacenterId>& preplacement) {
  if (count == 0 || a == b) return 0.0;
  const Dataset& da = w.dataset(a);
  const Dataset& db = w.dataset(b);
  const bool fa = da.placement.is_fixed();
  const bool fb = db.placement.is_fixed();
  if (fa && fb) return 0.0;
  const Bytes size = fa ? db.size : fb ? da.size : std::min(da.size, db.size);
  const DatacenterId pa = preplacement.at(index(a));
  const DatacenterId pb = preplacement.at(index(b));
  const double band = pa == pb ? env.max_bandwidth() : env.bandwidth(pa, pb);
  return static_cast<double>(count) * static_cast<double>(size) / band;
}

StrategyResult finish(const Workflow& w, const Environment& env, Particle particle,
                      std::uint64_t seed, Clock::time_point start, std::size_t iterations_total,
                      std::size_t iterations_to_best, std::vector<Fitness> history = {}) {
  StrategyResult r;
  r.outcome = Decoder(w, env).decode(particle);
  r.particle = std::move(particle);
  r.stats.best_time_s = r.outcome.total_time_s;
  r.stats.feasible = r.outcome.feasible;
  r.stats.iterations_total = iterations_total;
  r.stats.iterations_to_best = iterations_to_best;
  r.stats.seed = seed;
  if (history.empty()) history.push_back(r.outcome.fitness());
  r.history = std::move(history);
  r.stats.wall_ms = elapsed_ms(start);
  return r;
}

} // namespace

double dependency_degree(DatasetId a, DatasetId b, const Workflow& w, const Environment& env,
                         const std::vector<DatacenterId>& preplacement) {
  return dependency_from_count(shared_consumers(w, a, b), a, b, w, env, preplacement);
}

std::vector<DatacenterId> default_preplacement(const Workflow& w, const Environment& env) {
  const auto clouds = env.cloud_ids();
  const DatacenterId home = clouds.empty() ? dc_id(0) : clouds.front();
  std::vector<DatacenterId> out;
  out.reserve(w.dataset_count());
  for (const auto& ds : w.datasets()) out.push_back(ds.placement.fixed_dc.value_or(home));
  return out;
}

DependencyMatrix::DependencyMatrix(const Workflow& w, const Environment& env,
                                   const std::vector<DatacenterId>& preplacement)
    : n_(w.dataset_count()), values_(n_ * n_, 0.0) {
  std::vector<std::size_t> counts(n_ * n_, 0);
  for (const auto& task : w.tasks())
    for (std::size_t i = 0; i < task.inputs.size(); ++i)
      for (std::size_t j = i + 1; j < task.inputs.size(); ++j) {
        const std::size_t a = index(task.inputs[i]);
        const std::size_t b = index(task.inputs[j]);
        ++counts[a * n_ + b];
        ++counts[b * n_ + a];
      }
  for (std::size_t a = 0; a < n_; ++a)
    for (std::size_t b = a + 1; b < n_; ++b) {
      const std::size_t c = counts[a * n_ + b];
      if (c == 0) continue;
      const double v =
          dependency_from_count(c, dataset_id(a), dataset_id(b), w, env, preplacement);
      values_[a * n_ + b] = v;
      values_[b * n_ + a] = v;
    }
}

std::vector<double> DependencyMatrix::row(std::size_t i) const {
  return {values_.begin() + static_cast<std::ptrdiff_t>(i * n_),
          values_.begin() + static_cast<std::ptrdiff_t>((i + 1) * n_)};
}

// ---------------------------------------------------------------------------
// Clustering baseline

namespace {

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

/// Lloyd's k-means with k-means++ seeding; returns a cluster index per point.
std::vector<std::size_t> kmeans(const std::vector<std::vector<double>>& points, std::size_t k,
                                Rng& rng) {
  const std::size_t n = points.size();
  std::vector<std::size_t> label(n, 0);
  if (n == 0 || k <= 1) return label;

  std::vector<std::vector<double>> centers;
  centers.push_back(points[rng.below(n)]);
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  while (centers.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], squared_distance(points[i], centers.back()));
      total += nearest[i];
    }
    std::size_t pick = rng.below(n);
    if (total > 0.0) {
      double target = rng.uniform01() * total;
      for (std::size_t i = 0; i < n; ++i) {
        target -= nearest[i];
        if (target < 0.0) {
          pick = i;
          break;
        }
      }
    }
    centers.push_back(points[pick]);
  }

  const std::size_t dim = points.front().size();
  for (int iter = 0; iter < 100; ++iter) {
    bool changed = iter == 0;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = squared_distance(points[i], centers[0]);
      for (std::size_t c = 1; c < k; ++c) {
        const double d = squared_distance(points[i], centers[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (label[i] != best) {
        label[i] = best;
        changed = true;
      }
    }
    if (!changed) break;
    std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      ++sizes[label[i]];
      for (std::size_t j = 0; j < dim; ++j) sums[label[i]][j] += points[i][j];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] == 0) continue;
      for (std::size_t j = 0; j < dim; ++j) sums[c][j] /= static_cast<double>(sizes[c]);
      centers[c] = std::move(sums[c]);
    }
  }
  return label;
}

class Storage {
public:
  explicit Storage(const Environment& env) : env_(&env), used_(env.size(), 0) {}

  bool fits(DatacenterId dc, Bytes size) const {
    return env_->datacenter(dc).capacity.admits(used_[index(dc)] + size);
  }
  void add(DatacenterId dc, Bytes size) { used_[index(dc)] += size; }

private:
  const Environment* env_;
  std::vector<Bytes> used_;
};

} // namespace

StrategyResult run_dco_kmeans(const Workflow& w, const Environment& env, std::uint64_t seed) {
  detail::require_valid_instance(w, env);
  const auto start = Clock::now();
  const std::size_t n = w.dataset_count();
  const auto clouds = env.cloud_ids();
  const DatacenterId cloud = clouds.empty() ? dc_id(0) : clouds.front();

  std::vector<DatacenterId> placement = default_preplacement(w, env);
  std::vector<bool> placed(n, false);
  Storage storage(env);
  for (const auto& ds : w.datasets())
    if (ds.placement.fixed_dc) {
      placed[index(ds.id)] = true;
      storage.add(*ds.placement.fixed_dc, ds.size);
    }

  // Stage 1: cluster initial flexible datasets by their dependency rows.
  const DependencyMatrix matrix(w, env, placement);
  std::vector<std::size_t> members;
  for (const auto& ds : w.datasets())
    if (!ds.placement.is_fixed() && ds.source.is_initial()) members.push_back(index(ds.id));
  std::vector<std::vector<double>> rows;
  rows.reserve(members.size());
  for (std::size_t m : members) rows.push_back(matrix.row(m));
  Rng rng = Rng::stream(seed, 0, 0, 0x4B4D4E53); // "KMNS"
  const std::size_t k = std::min(env.size(), members.size());
  const auto label = kmeans(rows, k, rng);

  struct Cluster {
    std::vector<std::size_t> datasets;
    double cohesion = 0.0;
    Bytes size = 0;
  };
  std::vector<Cluster> clusters(k);
  for (std::size_t i = 0; i < members.size(); ++i) {
    Cluster& c = clusters[label[i]];
    for (std::size_t other : c.datasets) c.cohesion += matrix(members[i], other);
    c.datasets.push_back(members[i]);
    c.size += w.datasets()[members[i]].size;
  }
  std::stable_sort(clusters.begin(), clusters.end(),
                   [](const Cluster& a, const Cluster& b) { return a.cohesion > b.cohesion; });

  auto affinity = [&](std::size_t d, DatacenterId dc) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (placed[j] && placement[j] == dc) sum += matrix(d, j);
    return sum;
  };

  // Stage 2: whole clusters to the edge with the strongest pull that has room.
  const auto edges = env.edge_ids();
  for (const Cluster& c : clusters) {
    if (c.datasets.empty()) continue;
    std::optional<DatacenterId> target;
    double best = -1.0;
    for (DatacenterId dc : edges) {
      if (!storage.fits(dc, c.size)) continue;
      double pull = 0.0;
      for (std::size_t d : c.datasets) pull += affinity(d, dc);
      if (pull > best) {
        best = pull;
        target = dc;
      }
    }
    for (std::size_t d : c.datasets) {
      DatacenterId dc = cloud;
      if (target) {
        dc = *target;
      } else {
        double best_single = -1.0;
        for (DatacenterId e : edges) {
          if (!storage.fits(e, w.datasets()[d].size)) continue;
          const double pull = affinity(d, e);
          if (pull > best_single) {
            best_single = pull;
            dc = e;
          }
        }
      }
      placement[d] = dc;
      placed[d] = true;
      storage.add(dc, w.datasets()[d].size);
    }
  }

  // Stage 3: generated flexible datasets, in production order, by current dependency.
  for (TaskId t : topological_order(w)) {
    const Task& task = w.task(t);
    for (DatasetId out : task.outputs) {
      const Dataset& ds = w.dataset(out);
      if (ds.placement.is_fixed()) continue;
      std::vector<double> pull(env.size(), 0.0);
      bool any = false;
      for (std::size_t j = 0; j < n; ++j) {
        if (!placed[j]) continue;
        const double v = dependency_degree(out, dataset_id(j), w, env, placement);
        pull[index(placement[j])] += v;
        any = any || v > 0.0;
      }
      if (!any)
        for (DatasetId in : task.inputs)
          pull[index(placement[index(in)])] += static_cast<double>(w.dataset(in).size);
      std::optional<DatacenterId> target;
      for (std::size_t c = 0; c < env.size(); ++c) {
        if (!storage.fits(dc_id(c), ds.size)) continue;
        if (!target || pull[c] > pull[index(*target)]) target = dc_id(c);
      }
      placement[index(out)] = target.value_or(cloud);
      placed[index(out)] = true;
      storage.add(placement[index(out)], ds.size);
    }
  }

  // Spill flexible datasets off overloaded edges, largest first, until the decode is feasible.
  Particle particle{placement};
  const Decoder decoder(w, env);
  for (Evaluation e = decoder.evaluate(particle); !e.fitness.feasible;
       e = decoder.evaluate(particle)) {
    std::optional<std::size_t> victim;
    for (std::size_t d = 0; d < n; ++d) {
      if (w.datasets()[d].placement.is_fixed() || particle[d] == cloud) continue;
      if (!e.overloaded[index(particle[d])]) continue;
      if (!victim || w.datasets()[d].size > w.datasets()[*victim].size) victim = d;
    }
    if (!victim) break;
    particle[*victim] = cloud;
  }
  return finish(w, env, std::move(particle), seed, start, 0, 0);
}

// ---------------------------------------------------------------------------
// Genetic baseline

void GsConfig::validate() const {
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (population < 1) throw ConfigError("gs population must be at least 1");
  if (max_generations < 1) throw ConfigError("gs max_generations must be at least 1");
  if (stall_window < 1) throw ConfigError("gs stall_window must be at least 1");
  if (tournament_size < 1) throw ConfigError("gs tournament_size must be at least 1");
  if (!unit(crossover_rate) || !unit(mutation_rate))
    throw ConfigError("gs rates must lie in [0, 1]");
  if (threads < 1) throw ConfigError("gs threads must be at least 1");
}

namespace {

constexpr std::uint64_t kGsInitTag = 0x4753494E; // "GSIN"
constexpr std::uint64_t kGsBreedTag = 0x47534252; // "GSBR"

struct BinaryCodec {
  std::size_t genes = 0;
  std::size_t bits = 0;
  std::size_t dc_count = 1;

  std::size_t length() const { return genes * bits; }

  Particle decode(const std::vector<std::uint8_t>& chromosome, const SearchSpace& space) const {
    Particle p;
    p.positions.resize(space.dimension());
    for (std::size_t k = 0; k < space.dimension(); ++k)
      if (space.fixed()[k]) p[k] = *space.fixed()[k];
    const auto& flexible = space.flexible_positions();
    for (std::size_t g = 0; g < genes; ++g) {
      std::size_t value = 0;
      for (std::size_t b = 0; b < bits; ++b) value = (value << 1) | chromosome[g * bits + b];
      p[flexible[g]] = dc_id(value % dc_count);
    }
    return p;
  }
};

} // namespace

StrategyResult run_gs(const Workflow& w, const Environment& env, const GsConfig& cfg,
                      std::uint64_t seed) {
  cfg.validate();
  detail::require_valid_instance(w, env);
  const auto start = Clock::now();
  const SearchSpace space(w, env);
  const Decoder decoder(w, env);

  BinaryCodec codec;
  codec.genes = space.flexible_positions().size();
  codec.dc_count = env.size();
  while ((std::size_t{1} << codec.bits) < codec.dc_count) ++codec.bits;
  const std::size_t length = codec.length();

  const std::size_t n = cfg.population;
  std::vector<std::vector<std::uint8_t>> pop(n, std::vector<std::uint8_t>(length));
  std::vector<Fitness> fit(n);
  detail::parallel_for(n, cfg.threads, [&](std::size_t i) {
    Rng rng = Rng::stream(seed, 0, i, kGsInitTag);
    for (auto& bit : pop[i]) bit = static_cast<std::uint8_t>(rng() & 1U);
    fit[i] = decoder.evaluate(codec.decode(pop[i], space)).fitness;
  });

  auto argbest = [&] {
    std::size_t b = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (fitness_compare(fit[i], fit[b]) < 0) b = i;
    return b;
  };
  std::size_t elite = argbest();
  std::vector<std::uint8_t> best = pop[elite];
  Fitness best_fit = fit[elite];
  std::vector<Fitness> history{best_fit};

  std::size_t stall = 0;
  std::size_t generations = 0;
  std::size_t best_generation = 0;
  std::vector<std::vector<std::uint8_t>> next(n);
  std::vector<Fitness> next_fit(n);
  for (std::size_t g = 1; g <= cfg.max_generations; ++g) {
    next[0] = best;
    next_fit[0] = best_fit;
    detail::parallel_for(n - 1, cfg.threads, [&](std::size_t slot) {
      const std::size_t i = slot + 1;
      Rng rng = Rng::stream(seed, g, i, kGsBreedTag);
      auto tournament = [&] {
        std::size_t winner = rng.below(n);
        for (std::size_t r = 1; r < cfg.tournament_size; ++r) {
          const std::size_t c = rng.below(n);
          const auto cmp = fitness_compare(fit[c], fit[winner]);
          if (cmp < 0 || (cmp == 0 && c < winner)) winner = c;
        }
        return winner;
      };
      const std::size_t a = tournament();
      const std::size_t b = tournament();
      std::vector<std::uint8_t> child = pop[a];
      if (length > 1 && rng.uniform01() < cfg.crossover_rate) {
        const std::size_t cut = 1 + rng.below(length - 1);
        std::copy(pop[b].begin() + static_cast<std::ptrdiff_t>(cut), pop[b].end(),
                  child.begin() + static_cast<std::ptrdiff_t>(cut));
      }
      for (std::size_t gene = 0; gene < codec.genes && codec.bits > 0; ++gene)
        if (rng.uniform01() < cfg.mutation_rate) child[gene * codec.bits + rng.below(codec.bits)] ^= 1U;
      next_fit[i] = decoder.evaluate(codec.decode(child, space)).fitness;
      next[i] = std::move(child);
    });
    std::swap(pop, next);
    std::swap(fit, next_fit);

    generations = g;
    elite = argbest();
    if (fitness_compare(fit[elite], best_fit) < 0) {
      best = pop[elite];
      best_fit = fit[elite];
      best_generation = g;
      stall = 0;
    } else {
      ++stall;
    }
    history.push_back(best_fit);
    if (stall >= cfg.stall_window) break;
  }
  return finish(w, env, codec.decode(best, space), seed, start, generations, best_generation,
                std::move(history));
}

// ---------------------------------------------------------------------------
// Oracle and random control

StrategyResult brute_force_optimal(const Workflow& w, const Environment& env,
                                   OracleLimits limits) {
  detail::require_valid_instance(w, env);
  const auto start = Clock::now();
  const SearchSpace space(w, env);
  const auto& flexible = space.flexible_positions();
  if (flexible.size() > limits.max_flexible)
    throw ConfigError("oracle limited to " + std::to_string(limits.max_flexible) +
                      " flexible datasets, instance has " + std::to_string(flexible.size()));
  if (env.size() > limits.max_datacenters)
    throw ConfigError("oracle limited to " + std::to_string(limits.max_datacenters) +
                      " datacenters, instance has " + std::to_string(env.size()));

  const Decoder decoder(w, env);
  Particle current;
  current.positions.resize(space.dimension(), dc_id(0));
  for (std::size_t k = 0; k < space.dimension(); ++k)
    if (space.fixed()[k]) current[k] = *space.fixed()[k];

  // Odometer over flexible positions, last position fastest: lexicographic order.
  Particle best = current;
  Fitness best_fit = decoder.evaluate(current).fitness;
  std::size_t visited = 1;
  for (;;) {
    std::size_t pos = flexible.size();
    while (pos > 0) {
      const std::size_t k = flexible[pos - 1];
      if (index(current[k]) + 1 < env.size()) {
        current[k] = dc_id(index(current[k]) + 1);
        break;
      }
      current[k] = dc_id(0);
      --pos;
    }
    if (pos == 0) break;
    ++visited;
    const Fitness f = decoder.evaluate(current).fitness;
    if (fitness_compare(f, best_fit) < 0) {
      best = current;
      best_fit = f;
    }
  }
  return finish(w, env, std::move(best), 0, start, visited, visited);
}

StrategyResult run_random(const Workflow& w, const Environment& env, std::uint64_t seed) {
  detail::require_valid_instance(w, env);
  const auto start = Clock::now();
  const SearchSpace space(w, env);
  Rng rng = Rng::stream(seed, 0, 0, 0x52414E44); // "RAND"
  return finish(w, env, space.random_particle(rng), seed, start, 0, 0);
}

} // namespace edgeplace
