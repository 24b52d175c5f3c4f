#pragma once

#include <edgeplace/types.hpp>

#include <optional>
#include <string>
#include <vector>

namespace edgeplace {

class Workflow;

/// Storage capacity: a byte count, or the unlimited sentinel used for cloud datacenters.
class Capacity {
public:
  static Capacity unlimited() noexcept { return Capacity{}; }
  static Capacity bytes(Bytes b) noexcept { return Capacity{b}; }

  bool is_unlimited() const noexcept { return !limit_.has_value(); }
  /// Finite limit; throws std::bad_optional_access when unlimited.
  Bytes limit() const { return limit_.value(); }
  bool admits(Bytes used) const noexcept { return !limit_ || used <= *limit_; }
  /// Bytes above the limit (0 when within capacity or unlimited).
  Bytes excess(Bytes used) const noexcept { return limit_ && used > *limit_ ? used - *limit_ : 0; }

  friend bool operator==(const Capacity&, const Capacity&) = default;

private:
  Capacity() = default;
  explicit Capacity(Bytes b) : limit_(b) {}
  std::optional<Bytes> limit_;
};

enum class DatacenterKind { Cloud, Edge };

struct Datacenter {
  DatacenterId id{};
  Capacity capacity = Capacity::unlimited();
  DatacenterKind kind = DatacenterKind::Cloud;

  bool is_edge() const noexcept { return kind == DatacenterKind::Edge; }
  friend bool operator==(const Datacenter&, const Datacenter&) = default;
};

/// Datacenters plus a symmetric link-speed matrix in bytes/second.
/// The diagonal is unused and stored as 0.
class Environment {
public:
  Environment() = default;
  Environment(std::vector<Datacenter> datacenters, std::vector<std::vector<double>> bandwidth);

  const std::vector<Datacenter>& datacenters() const noexcept { return datacenters_; }
  const Datacenter& datacenter(DatacenterId id) const { return datacenters_.at(index(id)); }
  std::size_t size() const noexcept { return datacenters_.size(); }

  /// Link speed in bytes/second between two distinct datacenters.
  double bandwidth(DatacenterId a, DatacenterId b) const {
    return bandwidth_.at(index(a)).at(index(b));
  }
  const std::vector<std::vector<double>>& bandwidth_matrix() const noexcept { return bandwidth_; }
  /// Fastest link in the environment (0 with fewer than two datacenters).
  double max_bandwidth() const noexcept;

  std::vector<DatacenterId> edge_ids() const;
  std::vector<DatacenterId> cloud_ids() const;

  friend bool operator==(const Environment&, const Environment&) = default;

private:
  std::vector<Datacenter> datacenters_;
  std::vector<std::vector<double>> bandwidth_;
};

/// Symmetry, positivity, capacity and hybrid-topology checks; empty means valid.
std::vector<std::string> validate_environment(const Environment& env);

/// Sum of dataset sizes / (|DC| - 1), rounded up. Throws ConfigError for |DC| < 2.
Bytes benchmark_capacity(const Workflow& w, std::size_t datacenter_count);

/// One cloud datacenter (dc 0) and three edge datacenters at 2.6x the
/// benchmark capacity, linked by the reference bandwidth matrix.
Environment build_basic_environment(const Workflow& w);

/// Reference link speeds among the basic four datacenters, in M/s.
inline constexpr double kBasicBandwidthMps[4][4] = {
    {0, 10, 20, 30}, {10, 0, 150, 150}, {20, 150, 0, 100}, {30, 150, 100, 0}};
inline constexpr double kBasicEdgeCapacityMultiplier = 2.6;
inline constexpr double kAddedEdgeEdgeMps = 120.0;
inline constexpr double kAddedEdgeCloudMps = 20.0;

/// Resizes the edge tier and rescales capacities and links.
///
/// Existing datacenters keep their links; edges added beyond the base get
/// 120 M/s to every other edge and 20 M/s to every cloud. Edge capacity is
/// `capacity_multiplier` x benchmark capacity for the new datacenter count.
/// Every link is then multiplied by `bandwidth_multiplier`.
Environment scale_environment(const Environment& base, std::size_t edge_count,
                              double capacity_multiplier, double bandwidth_multiplier,
                              const Workflow& w);

} // namespace edgeplace
