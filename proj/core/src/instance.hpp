#pragma once

#include <edgeplace/environment.hpp>
#include <edgeplace/workflow.hpp>

namespace edgeplace::detail {

/// Throws DataError naming the first problem with the workflow or topology.
inline void require_valid_instance(const Workflow& w, const Environment& env) {
  if (const auto env_errors = validate_environment(env); !env_errors.empty())
    throw DataError("invalid environment: " + env_errors.front());
  if (const auto violations = validate_workflow(w, env); !violations.empty())
    throw DataError("invalid workflow: " + violations.front().message);
}

} // namespace edgeplace::detail
