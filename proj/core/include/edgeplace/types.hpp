#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace edgeplace {

/// Dataset sizes and capacities, in bytes.
using Bytes = std::uint64_t;

inline constexpr Bytes kGigabyte = 1'000'000'000ULL;
inline constexpr Bytes kTerabyte = 1'000'000'000'000ULL;
/// One "M/s" of link speed, in bytes per second.
inline constexpr double kMegabytePerSecond = 1.0e6;

enum class TaskId : std::uint32_t {};
enum class DatasetId : std::uint32_t {};
enum class DatacenterId : std::uint16_t {};

constexpr std::size_t index(TaskId id) noexcept { return static_cast<std::size_t>(id); }
constexpr std::size_t index(DatasetId id) noexcept { return static_cast<std::size_t>(id); }
constexpr std::size_t index(DatacenterId id) noexcept { return static_cast<std::size_t>(id); }

constexpr TaskId task_id(std::size_t i) noexcept { return static_cast<TaskId>(i); }
constexpr DatasetId dataset_id(std::size_t i) noexcept { return static_cast<DatasetId>(i); }
constexpr DatacenterId dc_id(std::size_t i) noexcept { return static_cast<DatacenterId>(i); }

/// Malformed input documents (DAX, JSON) and invalid data.
class DataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid caller-supplied parameters or configuration.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

} // namespace edgeplace
