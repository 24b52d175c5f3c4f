#include <edgeplace/io.hpp>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <nlohmann/json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace edgeplace {

namespace pt = boost::property_tree;
using Json = nlohmann::ordered_json;

namespace {

std::string attribute(const pt::ptree& node, const char* name) {
  return node.get<std::string>(std::string("<xmlattr>.") + name, "");
}

Bytes parse_size(const std::string& text, const std::string& file) {
  if (text.empty()) return 0;
  if (text.front() == '-') throw DataError("file '" + file + "' has negative size " + text);
  Bytes value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw DataError("file '" + file + "' has malformed size '" + text + "'");
  return value;
}

} // namespace

Workflow parse_dax(std::string_view document) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(document)};
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw DataError(std::string("malformed DAX XML: ") + e.what());
  }
  const auto adag = tree.get_child_optional("adag");
  if (!adag) throw DataError("DAX document has no <adag> root element");

  std::vector<Task> tasks;
  std::vector<Dataset> datasets;
  std::unordered_map<std::string, std::size_t> file_index;
  std::unordered_map<std::string, std::size_t> job_index;
  std::vector<std::optional<std::size_t>> producer;

  for (const auto& [tag, node] : *adag) {
    if (tag != "job") continue;
    Task task;
    task.id = task_id(tasks.size());
    const std::string job_id = attribute(node, "id");
    task.name = attribute(node, "name");
    if (!job_id.empty() && !job_index.emplace(job_id, tasks.size()).second)
      throw DataError("duplicate job id '" + job_id + "'");
    bool any_uses = false;
    for (const auto& [utag, uses] : node) {
      if (utag != "uses") continue;
      any_uses = true;
      std::string file = attribute(uses, "file");
      if (file.empty()) file = attribute(uses, "name");
      if (file.empty()) throw DataError("job '" + job_id + "' has a <uses> entry without a file");
      const std::string link = attribute(uses, "link");
      const std::string size_text = attribute(uses, "size");
      auto [it, inserted] = file_index.emplace(file, datasets.size());
      if (inserted) {
        Dataset ds;
        ds.id = dataset_id(datasets.size());
        ds.name = file;
        ds.size = parse_size(size_text, file);
        datasets.push_back(std::move(ds));
        producer.emplace_back();
      } else if (!size_text.empty()) {
        const Bytes size = parse_size(size_text, file);
        Dataset& ds = datasets[it->second];
        if (ds.size == 0) ds.size = size;
        else if (size != 0 && size != ds.size)
          throw DataError("file '" + file + "' declared with sizes " + std::to_string(ds.size) +
                          " and " + std::to_string(size));
      }
      const DatasetId d = dataset_id(it->second);
      if (link == "input") {
        task.inputs.push_back(d);
      } else if (link == "output") {
        auto& p = producer[it->second];
        if (p && *p != tasks.size())
          throw DataError("file '" + file + "' is output by more than one job");
        p = tasks.size();
        task.outputs.push_back(d);
      } else {
        throw DataError("file '" + file + "' has unsupported link '" + link + "'");
      }
    }
    if (!any_uses) throw DataError("job '" + job_id + "' has no <uses> entries");
    tasks.push_back(std::move(task));
  }
  if (tasks.empty()) throw DataError("DAX document contains no jobs");

  for (std::size_t d = 0; d < datasets.size(); ++d)
    if (producer[d]) datasets[d].source = DatasetSource::generated(task_id(*producer[d]));

  for (const auto& [tag, node] : *adag) {
    if (tag != "child") continue;
    const std::string child = attribute(node, "ref");
    if (!job_index.count(child)) throw DataError("<child> references unknown job '" + child + "'");
    for (const auto& [ptag, parent] : node) {
      if (ptag != "parent") continue;
      const std::string ref = attribute(parent, "ref");
      if (!job_index.count(ref)) throw DataError("<parent> references unknown job '" + ref + "'");
      if (ref == child) throw DataError("job '" + ref + "' lists itself as parent");
    }
  }

  Workflow w(std::move(tasks), std::move(datasets));
  if (const auto violations = validate_workflow(w); !violations.empty())
    throw DataError("invalid DAX workflow: " + violations.front().message);
  return w;
}

namespace {

template <class T>
T get_field(const Json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw DataError(where + ": missing field '" + key + "'");
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw DataError(where + ": field '" + key + "' has the wrong type");
  }
}

template <class T>
std::optional<T> optional_field(const Json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  return get_field<T>(obj, key, where);
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("malformed JSON: ") + e.what());
  }
}

const Json& array_field(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw DataError(where + ": expected an object");
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_array())
    throw DataError(where + ": field '" + key + "' must be an array");
  return *it;
}

std::uint64_t unsigned_field(const Json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw DataError(where + ": missing field '" + key + "'");
  if (!it->is_number_unsigned())
    throw DataError(where + ": field '" + key + "' must be a non-negative integer");
  return it->get<std::uint64_t>();
}

std::optional<std::uint64_t> optional_unsigned(const Json& obj, const char* key,
                                               const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  return unsigned_field(obj, key, where);
}

std::vector<DatasetId> id_list(const Json& obj, const char* key, const std::string& where) {
  std::vector<DatasetId> out;
  for (const auto& v : array_field(obj, key, where)) {
    if (!v.is_number_unsigned()) throw DataError(where + ": '" + key + "' holds a non-id value");
    out.push_back(dataset_id(v.get<std::size_t>()));
  }
  return out;
}

} // namespace

std::string workflow_to_json(const Workflow& w) {
  Json tasks = Json::array();
  for (const auto& t : w.tasks()) {
    Json inputs = Json::array();
    Json outputs = Json::array();
    for (DatasetId d : t.inputs) inputs.push_back(index(d));
    for (DatasetId d : t.outputs) outputs.push_back(index(d));
    tasks.push_back({{"id", index(t.id)}, {"name", t.name}, {"inputs", inputs}, {"outputs", outputs}});
  }
  Json datasets = Json::array();
  for (const auto& d : w.datasets()) {
    Json ds = {{"id", index(d.id)}, {"name", d.name}, {"size_bytes", d.size}};
    ds["generator"] = d.source.generator ? Json(index(*d.source.generator)) : Json(nullptr);
    ds["fixed_dc"] = d.placement.fixed_dc ? Json(index(*d.placement.fixed_dc)) : Json(nullptr);
    datasets.push_back(std::move(ds));
  }
  return Json{{"tasks", tasks}, {"datasets", datasets}}.dump(2) + "\n";
}

Workflow parse_workflow_json(std::string_view text) {
  const Json doc = parse_json(text);
  std::vector<Task> tasks;
  for (const auto& t : array_field(doc, "tasks", "workflow")) {
    const std::string where = "task #" + std::to_string(tasks.size());
    Task task;
    task.id = task_id(unsigned_field(t, "id", where));
    task.name = optional_field<std::string>(t, "name", where).value_or("");
    task.inputs = id_list(t, "inputs", where);
    task.outputs = id_list(t, "outputs", where);
    tasks.push_back(std::move(task));
  }
  std::vector<Dataset> datasets;
  for (const auto& d : array_field(doc, "datasets", "workflow")) {
    const std::string where = "dataset #" + std::to_string(datasets.size());
    Dataset ds;
    ds.id = dataset_id(unsigned_field(d, "id", where));
    ds.name = optional_field<std::string>(d, "name", where).value_or("");
    ds.size = unsigned_field(d, "size_bytes", where);
    if (const auto g = optional_unsigned(d, "generator", where))
      ds.source = DatasetSource::generated(task_id(*g));
    if (const auto f = optional_unsigned(d, "fixed_dc", where))
      ds.placement = PlacementClass::fixed(dc_id(*f));
    datasets.push_back(std::move(ds));
  }
  Workflow w(std::move(tasks), std::move(datasets));
  if (const auto violations = validate_workflow(w); !violations.empty())
    throw DataError("invalid workflow JSON: " + violations.front().message);
  return w;
}

std::string environment_to_json(const Environment& env) {
  Json dcs = Json::array();
  for (const auto& dc : env.datacenters()) {
    Json cap = dc.capacity.is_unlimited() ? Json("unlimited") : Json(dc.capacity.limit());
    dcs.push_back({{"id", index(dc.id)},
                   {"kind", dc.is_edge() ? "edge" : "cloud"},
                   {"capacity_bytes", cap}});
  }
  Json bw = Json::array();
  for (const auto& row : env.bandwidth_matrix()) {
    Json r = Json::array();
    for (double b : row) r.push_back(b / kMegabytePerSecond);
    bw.push_back(std::move(r));
  }
  return Json{{"datacenters", dcs}, {"bandwidth_mbps", bw}}.dump(2) + "\n";
}

Environment parse_environment_json(std::string_view text) {
  const Json doc = parse_json(text);
  std::vector<Datacenter> dcs;
  for (const auto& d : array_field(doc, "datacenters", "topology")) {
    const std::string where = "datacenter #" + std::to_string(dcs.size());
    Datacenter dc;
    dc.id = dc_id(unsigned_field(d, "id", where));
    const auto kind = get_field<std::string>(d, "kind", where);
    if (kind == "cloud") dc.kind = DatacenterKind::Cloud;
    else if (kind == "edge") dc.kind = DatacenterKind::Edge;
    else throw DataError(where + ": kind must be \"cloud\" or \"edge\"");
    const auto cap = d.find("capacity_bytes");
    if (cap == d.end()) throw DataError(where + ": missing field 'capacity_bytes'");
    if (cap->is_string() && cap->get<std::string>() == "unlimited")
      dc.capacity = Capacity::unlimited();
    else
      dc.capacity = Capacity::bytes(unsigned_field(d, "capacity_bytes", where));
    dcs.push_back(dc);
  }
  std::vector<std::vector<double>> bw;
  for (const auto& row : array_field(doc, "bandwidth_mbps", "topology")) {
    if (!row.is_array()) throw DataError("topology: bandwidth rows must be arrays");
    std::vector<double> r;
    for (const auto& v : row) {
      if (!v.is_number()) throw DataError("topology: bandwidth entries must be numbers");
      r.push_back(v.get<double>() * kMegabytePerSecond);
    }
    bw.push_back(std::move(r));
  }
  Environment env(std::move(dcs), std::move(bw));
  if (const auto errors = validate_environment(env); !errors.empty())
    throw DataError("invalid topology: " + errors.front());
  return env;
}

std::string merge_plan_to_json(const MergePlan& plan) {
  Json merges = Json::array();
  for (const auto& m : plan.merges) {
    Json constituents = Json::array();
    for (DatasetId d : m.constituents) constituents.push_back(index(d));
    merges.push_back({{"merged_id", index(m.merged_id)}, {"constituents", constituents}});
  }
  Json compressed_of = Json::array();
  for (DatasetId d : plan.compressed_of) compressed_of.push_back(index(d));
  return Json{{"original_datasets", plan.original_count()},
              {"compressed_datasets", plan.compressed.dataset_count()},
              {"merges", merges},
              {"compressed_of", compressed_of}}
             .dump(2) + "\n";
}

std::string outcome_to_json(const PlacementOutcome& outcome, const Particle& particle) {
  Json placement = Json::array();
  for (DatacenterId dc : particle.positions) placement.push_back(index(dc));
  Json task_dc = Json::array();
  for (DatacenterId dc : outcome.task_dc) task_dc.push_back(index(dc));
  Json transfers = Json::array();
  for (const auto& t : outcome.transfers)
    transfers.push_back({{"src", index(t.src)},
                         {"dataset", index(t.dataset)},
                         {"dst", index(t.dst)},
                         {"seconds", t.seconds}});
  return Json{{"feasible", outcome.feasible},
              {"total_time_s", outcome.total_time_s},
              {"overload_bytes", outcome.overload},
              {"placement", placement},
              {"task_dc", task_dc},
              {"transfers", transfers},
              {"usage_bytes", outcome.usage},
              {"peak_bytes", outcome.peak}}
             .dump(2) + "\n";
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw DataError("error while reading '" + path.string() + "'");
  return ss.str();
}

Workflow load_workflow_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '<') return parse_dax(text);
  return parse_workflow_json(text);
}

Environment load_environment_file(const std::filesystem::path& path) {
  return parse_environment_json(read_text_file(path));
}

} // namespace edgeplace
