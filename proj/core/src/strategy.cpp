#include <edgeplace/strategy.hpp>

#include <array>
#include <utility>

namespace edgeplace {

namespace {

constexpr std::array<std::pair<StrategyKind, std::string_view>, 6> kNames{{
    {StrategyKind::GaDpso, "gadpso"},
    {StrategyKind::NgaDpso, "nga_dpso"},
    {StrategyKind::Gs, "gs"},
    {StrategyKind::DcoKmeans, "dco_kmeans"},
    {StrategyKind::Random, "random"},
    {StrategyKind::Oracle, "oracle"},
}};

StrategyResult from_search(SearchResult r) {
  return {std::move(r.best), std::move(r.outcome), r.stats, std::move(r.history)};
}

} // namespace

std::string_view strategy_name(StrategyKind kind) noexcept {
  for (const auto& [k, name] : kNames)
    if (k == kind) return name;
  return "unknown";
}

std::optional<StrategyKind> parse_strategy(std::string_view name) noexcept {
  for (const auto& [k, n] : kNames)
    if (n == name) return k;
  return std::nullopt;
}

StrategyResult run_strategy(StrategyKind kind, const Workflow& w, const Environment& env,
                            std::uint64_t seed, const StrategySettings& settings) {
  switch (kind) {
  case StrategyKind::GaDpso:
  case StrategyKind::NgaDpso: {
    SwarmConfig cfg = settings.swarm;
    cfg.seed = seed;
    cfg.preprocessing_enabled = kind == StrategyKind::GaDpso;
    return from_search(run_gadpso(w, env, cfg));
  }
  case StrategyKind::Gs:
    return run_gs(w, env, settings.gs, seed);
  case StrategyKind::DcoKmeans:
    return run_dco_kmeans(w, env, seed);
  case StrategyKind::Random:
    return run_random(w, env, seed);
  case StrategyKind::Oracle: {
    StrategyResult r = brute_force_optimal(w, env, settings.oracle);
    r.stats.seed = seed;
    return r;
  }
  }
  throw ConfigError("unknown strategy");
}

} // namespace edgeplace
