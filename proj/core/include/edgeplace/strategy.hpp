#pragma once

#include <edgeplace/baselines.hpp>

#include <optional>
#include <string_view>

namespace edgeplace {

enum class StrategyKind { GaDpso, NgaDpso, Gs, DcoKmeans, Random, Oracle };

std::string_view strategy_name(StrategyKind kind) noexcept;
std::optional<StrategyKind> parse_strategy(std::string_view name) noexcept;

struct StrategySettings {
  SwarmConfig swarm;
  GsConfig gs;
  OracleLimits oracle;
};

/// Uniform entry point: (workflow, environment, seed, settings) -> result.
/// `nga_dpso` is GA-DPSO with preprocessing disabled.
StrategyResult run_strategy(StrategyKind kind, const Workflow& w, const Environment& env,
                            std::uint64_t seed, const StrategySettings& settings);

} // namespace edgeplace
