#include "parallel.hpp"

#include <edgeplace/experiment.hpp>
#include <edgeplace/io.hpp>

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <sstream>

namespace edgeplace {

using Json = nlohmann::ordered_json;

namespace {

void reject_unknown(const Json& obj, std::initializer_list<std::string_view> allowed,
                    const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (std::string_view a : allowed) known = known || item.key() == a;
    if (!known) throw ConfigError(where + ": unknown field '" + item.key() + "'");
  }
}

std::string path_of(const std::string& where, const std::string& key) {
  return where.empty() ? key : where + "." + key;
}

template <class T>
void read(const Json& obj, const char* key, T& out, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) return;
  const std::string field = path_of(where, key);
  if constexpr (std::is_same_v<T, bool>) {
    if (!it->is_boolean()) throw ConfigError(field + " must be a boolean");
  } else if constexpr (std::is_integral_v<T>) {
    if (!it->is_number_unsigned()) throw ConfigError(field + " must be a non-negative integer");
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!it->is_number()) throw ConfigError(field + " must be a number");
  } else {
    if (!it->is_string()) throw ConfigError(field + " must be a string");
  }
  out = it->get<T>();
}

void read_swarm(const Json& j, SwarmConfig& cfg) {
  reject_unknown(j,
                 {"population", "max_iterations", "stall_window", "w_max", "w_min", "c1_start",
                  "c1_end", "c2_start", "c2_end", "divergence_offset", "inertia_mode"},
                 "swarm");
  read(j, "population", cfg.population, "swarm");
  read(j, "max_iterations", cfg.max_iterations, "swarm");
  read(j, "stall_window", cfg.stall_window, "swarm");
  read(j, "w_max", cfg.w_max, "swarm");
  read(j, "w_min", cfg.w_min, "swarm");
  read(j, "c1_start", cfg.c1_start, "swarm");
  read(j, "c1_end", cfg.c1_end, "swarm");
  read(j, "c2_start", cfg.c2_start, "swarm");
  read(j, "c2_end", cfg.c2_end, "swarm");
  read(j, "divergence_offset", cfg.divergence_offset, "swarm");
  std::string mode = cfg.inertia_mode == InertiaMode::Adaptive ? "adaptive" : "linear";
  read(j, "inertia_mode", mode, "swarm");
  if (mode == "adaptive") cfg.inertia_mode = InertiaMode::Adaptive;
  else if (mode == "linear") cfg.inertia_mode = InertiaMode::Linear;
  else throw ConfigError("swarm.inertia_mode must be \"adaptive\" or \"linear\"");
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("swarm: ") + e.what());
  }
}

void read_gs(const Json& j, GsConfig& cfg) {
  reject_unknown(j,
                 {"population", "max_generations", "stall_window", "tournament_size",
                  "crossover_rate", "mutation_rate"},
                 "gs");
  read(j, "population", cfg.population, "gs");
  read(j, "max_generations", cfg.max_generations, "gs");
  read(j, "stall_window", cfg.stall_window, "gs");
  read(j, "tournament_size", cfg.tournament_size, "gs");
  read(j, "crossover_rate", cfg.crossover_rate, "gs");
  read(j, "mutation_rate", cfg.mutation_rate, "gs");
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("gs: ") + e.what());
  }
}

} // namespace

Scenario load_scenario(std::string_view json_text, const std::filesystem::path& base_dir) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
  }
  reject_unknown(doc,
                 {"id", "workflow", "scale", "environment", "private_ratio", "strategies",
                  "repetitions", "base_seed", "swarm", "gs", "oracle", "record_timing"},
                 "scenario");
  Scenario s;
  read(doc, "id", s.id, "");

  const auto wf = doc.find("workflow");
  if (wf == doc.end()) throw ConfigError("workflow: required field is missing");
  if (wf->is_string()) {
    std::filesystem::path p = wf->get<std::string>();
    s.workflow_path = p.is_relative() ? base_dir / p : p;
  } else if (wf->is_object()) {
    reject_unknown(*wf, {"synthetic"}, "workflow");
    const auto syn = wf->find("synthetic");
    if (syn == wf->end()) throw ConfigError("workflow.synthetic: required field is missing");
    reject_unknown(*syn, {"tasks", "datasets", "size_min_bytes", "size_max_bytes", "seed"},
                   "workflow.synthetic");
    SyntheticSpec spec;
    read(*syn, "tasks", spec.tasks, "workflow.synthetic");
    read(*syn, "datasets", spec.datasets, "workflow.synthetic");
    read(*syn, "size_min_bytes", spec.sizes.min, "workflow.synthetic");
    read(*syn, "size_max_bytes", spec.sizes.max, "workflow.synthetic");
    read(*syn, "seed", spec.seed, "workflow.synthetic");
    if (spec.tasks == 0 || spec.datasets == 0)
      throw ConfigError("workflow.synthetic: tasks and datasets must be positive");
    if (spec.sizes.min > spec.sizes.max)
      throw ConfigError("workflow.synthetic: size_min_bytes exceeds size_max_bytes");
    s.synthetic = spec;
  } else {
    throw ConfigError("workflow must be a path string or a {\"synthetic\": {...}} object");
  }

  std::string scale = "medium";
  read(doc, "scale", scale, "");
  if (scale == "small") s.scale = WorkflowScale::Small;
  else if (scale == "medium") s.scale = WorkflowScale::Medium;
  else if (scale == "large") s.scale = WorkflowScale::Large;
  else throw ConfigError("scale must be one of small, medium, large");

  if (const auto env = doc.find("environment"); env != doc.end()) {
    reject_unknown(*env, {"edge_count", "capacity_multiplier", "bandwidth_multiplier"},
                   "environment");
    read(*env, "edge_count", s.environment.edge_count, "environment");
    read(*env, "capacity_multiplier", s.environment.capacity_multiplier, "environment");
    read(*env, "bandwidth_multiplier", s.environment.bandwidth_multiplier, "environment");
    if (s.environment.edge_count < 1) throw ConfigError("environment.edge_count must be >= 1");
    if (!(s.environment.capacity_multiplier > 0.0))
      throw ConfigError("environment.capacity_multiplier must be positive");
    if (!(s.environment.bandwidth_multiplier > 0.0))
      throw ConfigError("environment.bandwidth_multiplier must be positive");
  }

  read(doc, "private_ratio", s.private_ratio, "");
  if (!(s.private_ratio >= 0.0 && s.private_ratio <= 1.0))
    throw ConfigError("private_ratio must lie in [0, 1]");

  if (const auto st = doc.find("strategies"); st != doc.end()) {
    if (!st->is_array() || st->empty())
      throw ConfigError("strategies must be a non-empty array of names");
    s.strategies.clear();
    for (const auto& name : *st) {
      const auto kind = name.is_string() ? parse_strategy(name.get<std::string>()) : std::nullopt;
      if (!kind) throw ConfigError("strategies: unknown strategy " + name.dump());
      s.strategies.push_back(*kind);
    }
  }

  read(doc, "repetitions", s.repetitions, "");
  if (s.repetitions < 1) throw ConfigError("repetitions must be at least 1");
  read(doc, "base_seed", s.base_seed, "");
  read(doc, "record_timing", s.record_timing, "");
  if (const auto j = doc.find("swarm"); j != doc.end()) read_swarm(*j, s.settings.swarm);
  if (const auto j = doc.find("gs"); j != doc.end()) read_gs(*j, s.settings.gs);
  if (const auto j = doc.find("oracle"); j != doc.end()) {
    reject_unknown(*j, {"max_flexible", "max_datacenters"}, "oracle");
    read(*j, "max_flexible", s.settings.oracle.max_flexible, "oracle");
    read(*j, "max_datacenters", s.settings.oracle.max_datacenters, "oracle");
  }
  return s;
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
  return load_scenario(text, path.parent_path());
}

Workflow scenario_workflow(const Scenario& s) {
  Workflow w;
  if (s.workflow_path) {
    w = load_workflow_file(*s.workflow_path);
  } else if (s.synthetic) {
    w = generate_synthetic_workflow(s.synthetic->tasks, s.synthetic->datasets, s.synthetic->sizes,
                                    s.synthetic->seed);
  } else {
    throw ConfigError("scenario names no workflow");
  }
  std::vector<Dataset> datasets = w.datasets();
  for (auto& d : datasets) d.placement = PlacementClass::flexible();
  return Workflow(w.tasks(), std::move(datasets));
}

Environment scenario_environment(const Scenario& s, const Workflow& w) {
  return scale_environment(build_basic_environment(w), s.environment.edge_count,
                           s.environment.capacity_multiplier, s.environment.bandwidth_multiplier,
                           w);
}

std::string workflow_label(const Scenario& s) {
  if (s.workflow_path) return s.workflow_path->stem().string();
  if (s.synthetic)
    return "synthetic-" + std::to_string(s.synthetic->tasks) + "x" +
           std::to_string(s.synthetic->datasets) + "-" + std::to_string(s.synthetic->seed);
  return "none";
}

ExperimentReport run_experiment(const Scenario& s, std::size_t threads) {
  if (s.repetitions < 1) throw ConfigError("repetitions must be at least 1");
  if (s.strategies.empty()) throw ConfigError("scenario lists no strategies");
  const Workflow w = scenario_workflow(s);
  const Environment env = scenario_environment(s, w);
  const std::string label = workflow_label(s);
  const auto edges = env.edge_ids();

  const std::size_t reps = s.repetitions;
  std::vector<Workflow> instances(reps);
  detail::parallel_for(reps, threads, [&](std::size_t r) {
    instances[r] = assign_private_datasets(w, s.private_ratio, edges, s.base_seed + r);
  });

  ExperimentReport report;
  report.rows.resize(s.strategies.size() * reps);
  detail::parallel_for(report.rows.size(), threads, [&](std::size_t job) {
    const StrategyKind kind = s.strategies[job / reps];
    const std::size_t r = job % reps;
    const std::uint64_t seed = s.base_seed + r;
    const StrategyResult result = run_strategy(kind, instances[r], env, seed, s.settings);
    ReportRow& row = report.rows[job];
    row.scenario = s.id;
    row.workflow = label;
    row.strategy = std::string(strategy_name(kind));
    row.repetition = r;
    row.seed = seed;
    row.best_time_s = result.stats.best_time_s;
    row.feasible = result.stats.feasible;
    row.iterations_to_best = result.stats.iterations_to_best;
    row.iterations_total = result.stats.iterations_total;
    row.wall_ms = s.record_timing ? result.stats.wall_ms : 0.0;
  });
  report.summaries = summarize(report.rows);
  return report;
}

namespace {

MeanStd mean_std(const std::vector<double>& v) {
  MeanStd out;
  if (v.empty()) return out;
  double sum = 0.0;
  for (double x : v) sum += x;
  out.mean = sum / static_cast<double>(v.size());
  if (v.size() > 1) {
    double sq = 0.0;
    for (double x : v) sq += (x - out.mean) * (x - out.mean);
    out.stddev = std::sqrt(sq / static_cast<double>(v.size() - 1));
  }
  return out;
}

} // namespace

std::vector<SummaryRow> summarize(const std::vector<ReportRow>& rows) {
  std::vector<SummaryRow> out;
  std::vector<std::vector<const ReportRow*>> groups;
  for (const auto& row : rows) {
    std::size_t g = 0;
    while (g < out.size() && out[g].strategy != row.strategy) ++g;
    if (g == out.size()) {
      out.push_back({});
      out.back().strategy = row.strategy;
      groups.emplace_back();
    }
    groups[g].push_back(&row);
  }
  for (std::size_t g = 0; g < out.size(); ++g) {
    std::vector<double> time;
    std::vector<double> iters;
    std::vector<double> wall;
    for (const ReportRow* r : groups[g]) {
      time.push_back(r->best_time_s);
      iters.push_back(static_cast<double>(r->iterations_to_best));
      wall.push_back(r->wall_ms);
      out[g].feasible_runs += r->feasible;
    }
    out[g].runs = groups[g].size();
    out[g].best_time_s = mean_std(time);
    out[g].iterations_to_best = mean_std(iters);
    out[g].wall_ms = mean_std(wall);
  }
  return out;
}

namespace {

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

/// Same 6-significant-digit rounding as the CSV, kept numeric for JSON.
Json json_number(double v) { return Json(std::stod(format_number(v))); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

Json mean_std_json(const MeanStd& m) {
  return {{"mean", json_number(m.mean)}, {"stddev", json_number(m.stddev)}};
}

} // namespace

void write_report(const ExperimentReport& report, ReportFormat format, std::ostream& out) {
  if (report.rows.empty()) throw ConfigError("report has no rows");
  if (format == ReportFormat::Csv) {
    out << kCsvHeader << '\n';
    for (const auto& r : report.rows)
      out << csv_field(r.scenario) << ',' << csv_field(r.workflow) << ',' << r.strategy << ','
          << r.repetition << ',' << r.seed << ',' << format_number(r.best_time_s) << ','
          << (r.feasible ? "true" : "false") << ',' << r.iterations_to_best << ','
          << r.iterations_total << ',' << format_number(r.wall_ms) << '\n';
    return;
  }
  Json rows = Json::array();
  for (const auto& r : report.rows)
    rows.push_back({{"scenario", r.scenario},
                    {"workflow", r.workflow},
                    {"strategy", r.strategy},
                    {"repetition", r.repetition},
                    {"seed", r.seed},
                    {"best_time_s", json_number(r.best_time_s)},
                    {"feasible", r.feasible},
                    {"iterations_to_best", r.iterations_to_best},
                    {"iterations_total", r.iterations_total},
                    {"wall_ms", json_number(r.wall_ms)}});
  Json summaries = Json::array();
  for (const auto& s : report.summaries)
    summaries.push_back({{"strategy", s.strategy},
                         {"runs", s.runs},
                         {"feasible_runs", s.feasible_runs},
                         {"best_time_s", mean_std_json(s.best_time_s)},
                         {"iterations_to_best", mean_std_json(s.iterations_to_best)},
                         {"wall_ms", mean_std_json(s.wall_ms)}});
  out << Json{{"rows", rows}, {"summaries", summaries}}.dump(2) << '\n';
}

void write_report(const ExperimentReport& report, ReportFormat format,
                  const std::filesystem::path& destination) {
  std::ostringstream buffer;
  write_report(report, format, buffer);
  std::ofstream file(destination, std::ios::binary | std::ios::trunc);
  if (!file) throw DataError("cannot write '" + destination.string() + "'");
  file << buffer.str();
  file.flush();
  if (!file) throw DataError("error while writing '" + destination.string() + "'");
}

void write_plot_data(const ExperimentReport& report, std::ostream& out) {
  out << "workflow,strategy,runs,time_div10_mean,time_div10_stddev\n";
  const std::string workflow = report.rows.empty() ? "" : report.rows.front().workflow;
  for (const auto& s : report.summaries)
    out << csv_field(workflow) << ',' << s.strategy << ',' << s.runs << ','
        << format_number(s.best_time_s.mean / 10.0) << ','
        << format_number(s.best_time_s.stddev / 10.0) << '\n';
}

} // namespace edgeplace
