#include <edgeplace/environment.hpp>
#include <edgeplace/workflow.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace edgeplace {

Environment::Environment(std::vector<Datacenter> datacenters,
                         std::vector<std::vector<double>> bandwidth)
    : datacenters_(std::move(datacenters)), bandwidth_(std::move(bandwidth)) {
  for (std::size_t i = 0; i < bandwidth_.size(); ++i)
    if (i < bandwidth_[i].size()) bandwidth_[i][i] = 0.0;
}

double Environment::max_bandwidth() const noexcept {
  double best = 0.0;
  for (const auto& row : bandwidth_)
    for (double b : row) best = std::max(best, b);
  return best;
}

std::vector<DatacenterId> Environment::edge_ids() const {
  std::vector<DatacenterId> out;
  for (const auto& dc : datacenters_)
    if (dc.is_edge()) out.push_back(dc.id);
  return out;
}

std::vector<DatacenterId> Environment::cloud_ids() const {
  std::vector<DatacenterId> out;
  for (const auto& dc : datacenters_)
    if (!dc.is_edge()) out.push_back(dc.id);
  return out;
}

std::vector<std::string> validate_environment(const Environment& env) {
  std::vector<std::string> out;
  const std::size_t n = env.size();
  const auto& bw = env.bandwidth_matrix();
  bool has_cloud = false;
  bool has_edge = false;
  for (std::size_t i = 0; i < n; ++i) {
    const Datacenter& dc = env.datacenters()[i];
    if (index(dc.id) != i) out.push_back("datacenter " + std::to_string(i) + " carries id " +
                                         std::to_string(index(dc.id)));
    if (dc.is_edge()) {
      has_edge = true;
      if (dc.capacity.is_unlimited())
        out.push_back("edge datacenter " + std::to_string(i) + " has unlimited capacity");
      else if (dc.capacity.limit() == 0)
        out.push_back("edge datacenter " + std::to_string(i) + " has zero capacity");
    } else {
      has_cloud = true;
      if (!dc.capacity.is_unlimited())
        out.push_back("cloud datacenter " + std::to_string(i) + " has a finite capacity");
    }
  }
  if (!has_cloud) out.push_back("topology has no cloud datacenter");
  if (!has_edge) out.push_back("topology has no edge datacenter");
  if (bw.size() != n) {
    out.push_back("bandwidth matrix has " + std::to_string(bw.size()) + " rows for " +
                  std::to_string(n) + " datacenters");
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (bw[i].size() != n) {
      out.push_back("bandwidth row " + std::to_string(i) + " has wrong length");
      return out;
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!(bw[i][j] > 0.0) || !(bw[j][i] > 0.0)) {
        std::ostringstream os;
        os << "link " << i << "-" << j << " is not positive";
        out.push_back(os.str());
      } else if (bw[i][j] != bw[j][i]) {
        std::ostringstream os;
        os << "link " << i << "-" << j << " is asymmetric (" << bw[i][j] << " vs " << bw[j][i]
           << ")";
        out.push_back(os.str());
      }
    }
  return out;
}

Bytes benchmark_capacity(const Workflow& w, std::size_t datacenter_count) {
  if (datacenter_count < 2) throw ConfigError("benchmark capacity needs at least two datacenters");
  const Bytes divisor = datacenter_count - 1;
  const Bytes total = w.total_size();
  return total / divisor + (total % divisor != 0 ? 1 : 0);
}

namespace {

Bytes scaled_capacity(Bytes benchmark, double multiplier) {
  return static_cast<Bytes>(std::llround(static_cast<double>(benchmark) * multiplier));
}

} // namespace

Environment build_basic_environment(const Workflow& w) {
  const Bytes edge_cap = scaled_capacity(benchmark_capacity(w, 4), kBasicEdgeCapacityMultiplier);
  std::vector<Datacenter> dcs;
  dcs.push_back({dc_id(0), Capacity::unlimited(), DatacenterKind::Cloud});
  for (std::size_t i = 1; i < 4; ++i)
    dcs.push_back({dc_id(i), Capacity::bytes(edge_cap), DatacenterKind::Edge});
  std::vector<std::vector<double>> bw(4, std::vector<double>(4, 0.0));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) bw[i][j] = kBasicBandwidthMps[i][j] * kMegabytePerSecond;
  return Environment(std::move(dcs), std::move(bw));
}

Environment scale_environment(const Environment& base, std::size_t edge_count,
                              double capacity_multiplier, double bandwidth_multiplier,
                              const Workflow& w) {
  if (edge_count < 1) throw ConfigError("edge_count must be at least 1");
  if (!(capacity_multiplier > 0.0)) throw ConfigError("capacity_multiplier must be positive");
  if (!(bandwidth_multiplier > 0.0)) throw ConfigError("bandwidth_multiplier must be positive");

  // Keep every cloud plus the first edge_count edges of the base, append new edges.
  std::vector<std::size_t> kept;
  std::size_t edges_kept = 0;
  for (const auto& dc : base.datacenters()) {
    if (!dc.is_edge()) {
      kept.push_back(index(dc.id));
    } else if (edges_kept < edge_count) {
      kept.push_back(index(dc.id));
      ++edges_kept;
    }
  }
  const std::size_t added = edge_count - edges_kept;
  const std::size_t n = kept.size() + added;
  const Bytes edge_cap = scaled_capacity(benchmark_capacity(w, n), capacity_multiplier);

  std::vector<Datacenter> dcs;
  std::vector<bool> is_edge;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const Datacenter& src = base.datacenters()[kept[i]];
    dcs.push_back({dc_id(i), src.is_edge() ? Capacity::bytes(edge_cap) : Capacity::unlimited(),
                   src.kind});
    is_edge.push_back(src.is_edge());
  }
  for (std::size_t i = 0; i < added; ++i) {
    dcs.push_back({dc_id(kept.size() + i), Capacity::bytes(edge_cap), DatacenterKind::Edge});
    is_edge.push_back(true);
  }

  std::vector<std::vector<double>> bw(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      double link = 0.0;
      if (i < kept.size() && j < kept.size())
        link = base.bandwidth_matrix()[kept[i]][kept[j]];
      else if (is_edge[i] && is_edge[j])
        link = kAddedEdgeEdgeMps * kMegabytePerSecond;
      else
        link = kAddedEdgeCloudMps * kMegabytePerSecond;
      bw[i][j] = link * bandwidth_multiplier;
    }
  return Environment(std::move(dcs), std::move(bw));
}

} // namespace edgeplace
