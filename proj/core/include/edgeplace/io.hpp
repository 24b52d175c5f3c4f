#pragma once

#include <edgeplace/environment.hpp>
#include <edgeplace/placement.hpp>
#include <edgeplace/preprocess.hpp>
#include <edgeplace/workflow.hpp>

#include <filesystem>
#include <string>
#include <string_view>

namespace edgeplace {

/// Parses a Pegasus DAX document: one task per <job>, one dataset per distinct
/// file referenced by <uses>. Control-only <child>/<parent> edges are checked
/// for consistency but do not create data dependencies. Throws DataError.
Workflow parse_dax(std::string_view document);

/// Native JSON form:
///   {"tasks":[{"id","name","inputs":[..],"outputs":[..]}],
///    "datasets":[{"id","name","size_bytes","generator":int|null,"fixed_dc":int|null}]}
std::string workflow_to_json(const Workflow& w);
Workflow parse_workflow_json(std::string_view text);

/// {"datacenters":[{"id","kind":"cloud"|"edge","capacity_bytes":int|"unlimited"}],
///  "bandwidth_mbps":[[..]]}
std::string environment_to_json(const Environment& env);
Environment parse_environment_json(std::string_view text);

std::string merge_plan_to_json(const MergePlan& plan);
std::string outcome_to_json(const PlacementOutcome& outcome, const Particle& particle);

std::string read_text_file(const std::filesystem::path& path);
/// DAX or native JSON, chosen by the first non-blank character.
Workflow load_workflow_file(const std::filesystem::path& path);
Environment load_environment_file(const std::filesystem::path& path);

} // namespace edgeplace
