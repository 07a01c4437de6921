// SPDX-FileCopyrightText: © 2026 The llmperf Authors
//
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "llmperf/error.hpp"
#include "llmperf/json_fields.hpp"
#include "llmperf/precision.hpp"

// Parametric hardware descriptions. All quantities are base SI units:
// bytes, bytes/s, seconds, Hz, flops/s.
namespace llmperf::hw
{

inline constexpr int kSchemaVersion = 1;

enum class MemoryScope
{
    per_core,
    per_device,
    shared_pool,  // one physical pool shared by every device of the system
};

struct MemoryLevel
{
    std::string name;
    double capacity = 0;
    double read_bandwidth = 0;
    double write_bandwidth = 0;
    double access_latency = 0;
    MemoryScope scope = MemoryScope::per_device;

    bool operator==(const MemoryLevel &) const = default;
};

struct DeviceSpec
{
    std::string name;
    double clock = 0;
    std::map<Precision, double> peak_flops_by_precision;
    double utilization_ceiling = 1.0;
    // Device-local levels, innermost first. Main memory is not listed here.
    std::vector<MemoryLevel> memory_levels;

    // Throws ValidationError when the precision has no peak entry.
    double peak_flops(Precision p) const;
    const MemoryLevel *find_level(std::string_view name) const;

    bool operator==(const DeviceSpec &) const = default;
};

enum class Topology
{
    torus2d,
    switched,
    fully_connected_abstract,
};

struct InterconnectSpec
{
    Topology topology = Topology::fully_connected_abstract;
    std::vector<int> grid;  // torus2d only: {rows, cols}
    double link_bandwidth = 0;  // per direction
    double link_latency = 0;
    double per_device_injection_bandwidth = 0;

    bool operator==(const InterconnectSpec &) const = default;
};

struct MainMemoryPool
{
    double capacity = 0;
    double total_read_bandwidth = 0;
    double total_write_bandwidth = 0;
    double per_device_bandwidth = 0;
    double access_latency = 0;

    bool operator==(const MainMemoryPool &) const = default;
};

struct SystemSpec
{
    std::string name;
    DeviceSpec device;
    int device_count = 1;
    InterconnectSpec interconnect;
    MainMemoryPool main_memory;

    bool operator==(const SystemSpec &) const = default;
};

Violations validate_system(const SystemSpec &spec);

// Presets. `overrides` is a partial SystemSpec document; every key it names
// must exist in the preset. Invalid results throw ValidationError.
SystemSpec build_scd_blade_preset(const json &overrides = json::object());
SystemSpec build_gpu_baseline_preset(const json &overrides = json::object());

std::vector<std::string> system_preset_names();
bool is_system_preset(std::string_view name);
SystemSpec system_preset(std::string_view name, const json &overrides = json::object());

enum class Direction
{
    read,
    write,
};

// Per-device main-memory bandwidth when `active_devices` share the pool:
// min(per_device_bandwidth, pool_total(direction) / active_devices).
double effective_dram_bandwidth(const SystemSpec &spec, int active_devices, Direction direction);

// Raises both pool totals to per_device_bandwidth * device_count so the
// per-device figure is the only cap (bandwidth-per-device sweeps).
void lift_pool_caps(SystemSpec &spec);

// Capacity one device may use at a level: the full level for per-device and
// per-core scopes, an even share for shared pools.
double capacity_share(const SystemSpec &spec, const MemoryLevel &level);
double main_memory_share(const SystemSpec &spec);

std::string_view to_string(MemoryScope scope);
std::string_view to_string(Topology topology);

json to_json(const SystemSpec &spec);
SystemSpec system_from_json(const json &doc, const std::string &path = "system");

}  // namespace llmperf::hw
