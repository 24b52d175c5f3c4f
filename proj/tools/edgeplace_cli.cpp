#include <edgeplace/environment.hpp>
#include <edgeplace/experiment.hpp>
#include <edgeplace/io.hpp>
#include <edgeplace/preprocess.hpp>
#include <edgeplace/strategy.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace ep = edgeplace;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitData = 2;

ep::ReportFormat parse_format(const std::string& f) {
  return f == "json" ? ep::ReportFormat::Json : ep::ReportFormat::Csv;
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(out, std::ios::binary);
  if (!file || !(file << text)) throw ep::DataError("cannot write " + out);
}

struct RunArgs {
  std::string scenario, out, format = "csv", plot_data;
  std::size_t threads = 1;
  std::optional<std::uint64_t> seed;
};

int cmd_run(const RunArgs& a) {
  ep::Scenario s = ep::load_scenario_file(a.scenario);
  if (a.seed) s.base_seed = *a.seed;
  const ep::ExperimentReport report = ep::run_experiment(s, a.threads);
  if (a.out.empty())
    ep::write_report(report, parse_format(a.format), std::cout);
  else
    ep::write_report(report, parse_format(a.format), std::filesystem::path(a.out));
  if (!a.plot_data.empty()) {
    std::ofstream plot(a.plot_data);
    if (!plot) throw ep::DataError("cannot write " + a.plot_data);
    ep::write_plot_data(report, plot);
  }
  return kExitOk;
}

struct ValidateArgs {
  std::string workflow, topology;
};

int cmd_validate(const ValidateArgs& a) {
  if (a.workflow.empty() && a.topology.empty())
    throw ep::ConfigError("validate needs --workflow and/or --topology");
  std::size_t problems = 0;
  std::optional<ep::Environment> env;
  if (!a.topology.empty()) {
    env = ep::load_environment_file(a.topology);
    for (const auto& msg : ep::validate_environment(*env)) {
      std::cout << a.topology << ": " << msg << '\n';
      ++problems;
    }
  }
  if (!a.workflow.empty()) {
    const ep::Workflow w = ep::load_workflow_file(a.workflow);
    const auto issues = env ? ep::validate_workflow(w, *env) : ep::validate_workflow(w);
    for (const auto& v : issues) {
      std::cout << a.workflow << ": " << ep::to_string(v.kind) << ": " << v.message << '\n';
      ++problems;
    }
  }
  if (problems) return kExitData;
  std::cout << "ok\n";
  return kExitOk;
}

struct InspectArgs {
  std::string workflow, format = "text", out;
};

int cmd_inspect(const InspectArgs& a) {
  const ep::Workflow w = ep::load_workflow_file(a.workflow);
  const auto part = ep::classify_datasets(w);
  const ep::MergePlan plan = ep::preprocess_workflow(w);
  std::size_t fixed = 0;
  for (const auto& d : w.datasets()) fixed += d.placement.is_fixed();
  const double before = static_cast<double>(w.dataset_count());
  const double after = static_cast<double>(plan.compressed.dataset_count());

  nlohmann::ordered_json j;
  j["workflow"] = std::filesystem::path(a.workflow).stem().string();
  j["tasks"] = w.task_count();
  j["datasets"] = w.dataset_count();
  j["initial_datasets"] = part.initial.size();
  j["generated_datasets"] = part.generated.size();
  j["fixed_datasets"] = fixed;
  j["total_bytes"] = w.total_size();
  j["total_tb"] = static_cast<double>(w.total_size()) / 1e12;
  j["compressed_datasets"] = plan.compressed.dataset_count();
  j["merge_groups"] = plan.merges.size();
  j["compression_ratio"] = before > 0 ? (before - after) / before : 0.0;
  j["benchmark_capacity_bytes"] = ep::benchmark_capacity(w, 4);

  std::string text;
  if (a.format == "json") {
    text = j.dump(2) + "\n";
  } else if (a.format == "csv") {
    std::string head, row;
    for (auto it = j.begin(); it != j.end(); ++it) {
      head += (head.empty() ? "" : ",") + it.key();
      row += (row.empty() ? "" : ",") + (it->is_string() ? it->get<std::string>() : it->dump());
    }
    text = head + "\n" + row + "\n";
  } else {
    for (auto it = j.begin(); it != j.end(); ++it)
      text += it.key() + ": " + (it->is_string() ? it->get<std::string>() : it->dump()) + "\n";
  }
  emit(text, a.out);
  return kExitOk;
}

struct OracleArgs {
  std::string scenario, workflow, topology, out;
  std::uint64_t seed = 0;
};

int cmd_oracle(const OracleArgs& a) {
  ep::Workflow w;
  std::optional<ep::Environment> env;
  ep::OracleLimits limits;
  if (!a.scenario.empty()) {
    const ep::Scenario s = ep::load_scenario_file(a.scenario);
    const ep::Workflow base = ep::scenario_workflow(s);
    env = ep::scenario_environment(s, base);
    w = ep::assign_private_datasets(base, s.private_ratio, env->edge_ids(), a.seed);
    limits = s.settings.oracle;
  } else if (!a.workflow.empty()) {
    w = ep::load_workflow_file(a.workflow);
    env = a.topology.empty() ? ep::build_basic_environment(w) : ep::load_environment_file(a.topology);
  } else {
    throw ep::ConfigError("oracle needs --scenario or --workflow");
  }
  const auto issues = ep::validate_workflow(w, *env);
  if (!issues.empty()) throw ep::DataError("invalid instance: " + issues.front().message);
  const ep::StrategyResult r = ep::brute_force_optimal(w, *env, limits);
  emit(ep::outcome_to_json(r.outcome, r.particle) + "\n", a.out);
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Workflow data placement across edge and cloud datacenters"};
  app.require_subcommand(1);
  const std::set<std::string> formats{"csv", "json"};

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario and write the report");
  run_cmd->add_option("--scenario", run.scenario, "Scenario JSON file")->required();
  run_cmd->add_option("--out", run.out, "Report destination (stdout when omitted)");
  run_cmd->add_option("--format", run.format, "Report format")->check(CLI::IsMember(formats));
  run_cmd->add_option("--threads", run.threads, "Worker threads")->check(CLI::PositiveNumber);
  run_cmd->add_option("--seed", run.seed, "Override the scenario base seed");
  run_cmd->add_option("--plot-data", run.plot_data, "Also write plot-ready summary CSV");

  ValidateArgs val;
  auto* val_cmd = app.add_subcommand("validate", "Lint a workflow and/or topology");
  val_cmd->add_option("--workflow", val.workflow, "DAX or workflow JSON");
  val_cmd->add_option("--topology", val.topology, "Topology JSON");

  InspectArgs ins;
  auto* ins_cmd = app.add_subcommand("inspect", "Dataset and compression statistics");
  ins_cmd->add_option("--workflow", ins.workflow, "DAX or workflow JSON")->required();
  ins_cmd->add_option("--format", ins.format, "text, csv or json")
      ->check(CLI::IsMember({"text", "csv", "json"}));
  ins_cmd->add_option("--out", ins.out, "Destination (stdout when omitted)");

  OracleArgs ora;
  auto* ora_cmd = app.add_subcommand("oracle", "Exact optimum of a tiny instance");
  ora_cmd->add_option("--scenario", ora.scenario, "Scenario JSON file");
  ora_cmd->add_option("--workflow", ora.workflow, "DAX or workflow JSON");
  ora_cmd->add_option("--topology", ora.topology, "Topology JSON (basic setup when omitted)");
  ora_cmd->add_option("--seed", ora.seed, "Private-dataset seed for --scenario");
  ora_cmd->add_option("--out", ora.out, "Destination (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*val_cmd) return cmd_validate(val);
    if (*ins_cmd) return cmd_inspect(ins);
    if (*ora_cmd) return cmd_oracle(ora);
  } catch (const ep::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ep::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitConfig;
}
