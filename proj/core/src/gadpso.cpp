#include "instance.hpp"
#include "parallel.hpp"

#include <edgeplace/gadpso.hpp>
#include <edgeplace/preprocess.hpp>

#include <chrono>
#include <cmath>
#include <optional>

namespace edgeplace {

void SwarmConfig::validate() const {
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (population < 1) throw ConfigError("population must be at least 1");
  if (max_iterations < 1) throw ConfigError("max_iterations must be at least 1");
  if (stall_window < 1) throw ConfigError("stall_window must be at least 1");
  if (!unit(w_min) || !unit(w_max) || w_min > w_max)
    throw ConfigError("inertia bounds must satisfy 0 <= w_min <= w_max <= 1");
  if (!unit(c1_start) || !unit(c1_end) || !unit(c2_start) || !unit(c2_end))
    throw ConfigError("acceleration coefficients must lie in [0, 1]");
  if (!(divergence_offset > 1.0)) throw ConfigError("divergence_offset must exceed 1");
  if (threads < 1) throw ConfigError("threads must be at least 1");
}

SearchSpace::SearchSpace(const Workflow& w, const Environment& env) : dc_count_(env.size()) {
  if (dc_count_ == 0) throw ConfigError("environment has no datacenters");
  fixed_.reserve(w.dataset_count());
  for (const auto& ds : w.datasets()) {
    if (!ds.placement.is_fixed()) flexible_.push_back(fixed_.size());
    fixed_.push_back(ds.placement.fixed_dc);
  }
}

Particle SearchSpace::random_particle(Rng& rng) const {
  Particle p;
  p.positions.reserve(fixed_.size());
  for (const auto& f : fixed_) p.positions.push_back(f ? *f : dc_id(rng.below(dc_count_)));
  return p;
}

bool SearchSpace::contains(const Particle& p) const noexcept {
  if (p.size() != fixed_.size()) return false;
  for (std::size_t k = 0; k < fixed_.size(); ++k) {
    if (index(p[k]) >= dc_count_) return false;
    if (fixed_[k] && p[k] != *fixed_[k]) return false;
  }
  return true;
}

namespace {

void require_same_size(const Particle& a, const Particle& b) {
  if (a.size() != b.size())
    throw ConfigError("particle dimensions differ: " + std::to_string(a.size()) + " vs " +
                      std::to_string(b.size()));
}

} // namespace

double divergence(const Particle& x, const Particle& gbest) {
  require_same_size(x, gbest);
  if (x.size() == 0) return 0.0;
  std::size_t differ = 0;
  for (std::size_t k = 0; k < x.size(); ++k) differ += x[k] != gbest[k];
  return static_cast<double>(differ) / static_cast<double>(x.size());
}

double adaptive_inertia_weight(double d, const SwarmConfig& cfg) {
  return cfg.w_max - (cfg.w_max - cfg.w_min) * std::exp(d / (d - cfg.divergence_offset));
}

double linear_inertia_weight(std::size_t iter, const SwarmConfig& cfg) {
  return acceleration_coefficient(iter, cfg.w_max, cfg.w_min, cfg.max_iterations);
}

double acceleration_coefficient(std::size_t iter, double start, double end, std::size_t max_iter) {
  if (max_iter == 0) return start;
  return start - (start - end) * static_cast<double>(iter) / static_cast<double>(max_iter);
}

std::vector<std::size_t> mutation_candidates(const Particle& x, const SearchSpace& space,
                                             const Evaluation& current) {
  const auto& flexible = space.flexible_positions();
  if (current.fitness.feasible || current.overloaded.empty()) return flexible;
  std::vector<std::size_t> out;
  for (std::size_t k : flexible) {
    const std::size_t dc = index(x[k]);
    if (dc < current.overloaded.size() && current.overloaded[dc]) out.push_back(k);
  }
  return out.empty() ? flexible : out;
}

Particle mutate_particle(const Particle& x, double w, const SearchSpace& space,
                         const Evaluation& current, Rng& rng) {
  if (rng.uniform01() >= w) return x;
  const auto candidates = mutation_candidates(x, space, current);
  if (candidates.empty()) return x;
  Particle out = x;
  out[candidates[rng.below(candidates.size())]] = dc_id(rng.below(space.datacenter_count()));
  return out;
}

Particle crossover_segment(const Particle& x, const Particle& guide, std::size_t first,
                           std::size_t last) {
  require_same_size(x, guide);
  if (first > last || last >= x.size()) throw ConfigError("crossover segment out of range");
  Particle out = x;
  std::copy(guide.positions.begin() + static_cast<std::ptrdiff_t>(first),
            guide.positions.begin() + static_cast<std::ptrdiff_t>(last) + 1,
            out.positions.begin() + static_cast<std::ptrdiff_t>(first));
  return out;
}

Particle crossover_particle(const Particle& x, const Particle& guide, double c, Rng& rng) {
  require_same_size(x, guide);
  if (rng.uniform01() >= c || x.size() == 0) return x;
  const std::size_t i = rng.below(x.size());
  const std::size_t j = rng.below(x.size());
  return crossover_segment(x, guide, std::min(i, j), std::max(i, j));
}

OperatorStreams OperatorStreams::keyed(std::uint64_t seed, std::uint64_t iteration,
                                       std::uint64_t particle) noexcept {
  return {Rng::stream(seed, iteration, particle, 1), Rng::stream(seed, iteration, particle, 2),
          Rng::stream(seed, iteration, particle, 3)};
}

Particle update_particle(const Particle& x, const Particle& pbest, const Particle& gbest,
                         double w, double c1, double c2, const SearchSpace& space,
                         const Evaluation& current, OperatorStreams& streams) {
  require_same_size(x, pbest);
  require_same_size(x, gbest);
  Particle a = mutate_particle(x, w, space, current, streams.mutation);
  Particle b = crossover_particle(a, pbest, c1, streams.personal);
  return crossover_particle(b, gbest, c2, streams.global);
}

namespace {

constexpr std::uint64_t kInitTag = 0x494E4954; // "INIT"

/// Decodes search-space particles on the original workflow.
class Objective {
public:
  Objective(const Workflow& w, const Environment& env, std::optional<MergePlan> plan)
      : plan_(std::move(plan)), decoder_(w, env) {}

  const Workflow& search_workflow() const {
    return plan_ ? plan_->compressed : decoder_.workflow();
  }

  Particle expand(const Particle& p) const {
    return plan_ ? Particle{expand_positions(*plan_, p.positions)} : p;
  }

  Evaluation evaluate(const Particle& p) const { return decoder_.evaluate(expand(p)); }
  PlacementOutcome decode(const Particle& p) const { return decoder_.decode(expand(p)); }

private:
  std::optional<MergePlan> plan_;
  Decoder decoder_;
};

} // namespace

SearchResult run_gadpso(const Workflow& w, const Environment& env, const SwarmConfig& cfg) {
  cfg.validate();
  detail::require_valid_instance(w, env);
  const auto start = std::chrono::steady_clock::now();

  std::optional<MergePlan> plan;
  if (cfg.preprocessing_enabled) plan = preprocess_workflow(w);
  const Objective objective(w, env, std::move(plan));
  const SearchSpace space(objective.search_workflow(), env);

  const std::size_t n = cfg.population;
  std::vector<Particle> x(n);
  std::vector<Evaluation> eval(n);
  std::vector<Particle> pbest(n);
  std::vector<Fitness> pbest_fit(n);

  detail::parallel_for(n, cfg.threads, [&](std::size_t i) {
    Rng rng = Rng::stream(cfg.seed, 0, i, kInitTag);
    x[i] = space.random_particle(rng);
    eval[i] = objective.evaluate(x[i]);
    pbest[i] = x[i];
    pbest_fit[i] = eval[i].fitness;
  });

  std::size_t g = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (fitness_compare(pbest_fit[i], pbest_fit[g]) < 0) g = i;
  Particle gbest = pbest[g];
  Fitness gbest_fit = pbest_fit[g];

  SearchResult result;
  result.search_dimension = space.dimension();
  result.history.push_back(gbest_fit);

  std::size_t stall = 0;
  std::size_t iterations = 0;
  std::size_t best_iteration = 0;
  for (std::size_t t = 1; t <= cfg.max_iterations; ++t) {
    const double c1 = acceleration_coefficient(t, cfg.c1_start, cfg.c1_end, cfg.max_iterations);
    const double c2 = acceleration_coefficient(t, cfg.c2_start, cfg.c2_end, cfg.max_iterations);
    const double linear_w = linear_inertia_weight(t, cfg);

    detail::parallel_for(n, cfg.threads, [&](std::size_t i) {
      const double w_i = cfg.inertia_mode == InertiaMode::Adaptive
                             ? adaptive_inertia_weight(divergence(x[i], gbest), cfg)
                             : linear_w;
      OperatorStreams streams = OperatorStreams::keyed(cfg.seed, t, i);
      x[i] = update_particle(x[i], pbest[i], gbest, w_i, c1, c2, space, eval[i], streams);
      eval[i] = objective.evaluate(x[i]);
      if (fitness_compare(eval[i].fitness, pbest_fit[i]) < 0) {
        pbest[i] = x[i];
        pbest_fit[i] = eval[i].fitness;
      }
    });

    bool improved = false;
    for (std::size_t i = 0; i < n; ++i)
      if (fitness_compare(pbest_fit[i], gbest_fit) < 0) {
        gbest = pbest[i];
        gbest_fit = pbest_fit[i];
        improved = true;
      }
    result.history.push_back(gbest_fit);
    iterations = t;
    if (improved) {
      best_iteration = t;
      stall = 0;
    } else if (++stall >= cfg.stall_window) {
      break;
    }
  }

  result.best = objective.expand(gbest);
  result.outcome = objective.decode(gbest);
  result.stats.best_time_s = result.outcome.total_time_s;
  result.stats.feasible = result.outcome.feasible;
  result.stats.iterations_to_best = best_iteration;
  result.stats.iterations_total = iterations;
  result.stats.seed = cfg.seed;
  result.stats.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return result;
}

} // namespace edgeplace
