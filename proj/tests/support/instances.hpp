#pragma once

#include <edgeplace/environment.hpp>
#include <edgeplace/workflow.hpp>

#include <cstdint>
#include <filesystem>
#include <string>

namespace edgeplace::testing {

/// Five tasks over six datasets {3,5,3,3,5,8} GB; ds4 pinned to dc2, ds5 to dc3
/// (0-based ids 3 and 4, datacenters 1 and 2). t5 turns ds5 into ds6.
Workflow fig1_workflow();

/// Cloud dc1 plus edges dc2, dc3 at 20 GB; links 10, 20, 150 M/s.
Environment fig1_environment();

/// Small synthetic workflow under the basic environment with 25% private
/// datasets; at most 8 flexible datasets and 4 datacenters.
struct TinyInstance {
  Workflow workflow;
  Environment environment;
};
TinyInstance tiny_instance(std::uint64_t seed);

std::filesystem::path data_dir();
Workflow load_fixture(const std::string& name);

} // namespace edgeplace::testing
