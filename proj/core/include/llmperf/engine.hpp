// SPDX-FileCopyrightText: © 2026 The llmperf Authors
//
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "llmperf/hwspec.hpp"
#include "llmperf/mapping.hpp"
#include "llmperf/workload.hpp"

namespace llmperf::engine
{

// Request-level model of a memory level: at most `max_outstanding` requests
// of `request_granularity` bytes are in flight, so a level with latency L
// sustains at most granularity * outstanding / L bytes/s. Sustained bandwidth
// is `bandwidth_efficiency` of the nominal figure.
struct MemoryAccessModel
{
    std::uint64_t request_granularity = 4096;
    int max_outstanding = 64;
    double bandwidth_efficiency = 0.85;

    bool operator==(const MemoryAccessModel &) const = default;
};

Violations validate_memory_access(const MemoryAccessModel &mam);

struct PlacementPolicy
{
    // Pin KV-cache tensors to this level (e.g. "L2") instead of main memory.
    std::optional<std::string> kv_level;

    bool operator==(const PlacementPolicy &) const = default;
};

inline constexpr std::size_t kMaxLevels = 4;

struct LevelRates
{
    std::string name;
    double read_bandwidth = 0;
    double write_bandwidth = 0;
    double latency = 0;
    double capacity_share = 0;
};

// A device as the roofline sees it: one compute rate and the resolved
// hierarchy, innermost level first and main memory last.
struct DeviceRates
{
    double compute_rate = 0;  // peak * utilization_ceiling
    std::vector<LevelRates> levels;

    std::size_t main_memory() const { return levels.size() - 1; }
    std::optional<std::size_t> find(const std::string &name) const;
};

DeviceRates resolve_device(const hw::SystemSpec &sys, Precision precision, int active_devices);

using Residency = std::vector<std::uint8_t>;  // level index per operand

// weights, gradients and optimizer state stream from main memory; activations
// go to the innermost cache whose per-device share holds the kernel's
// activation live set; KV stays in main memory unless the policy pins it.
// Hints override: streamed -> main memory, cacheable -> innermost fitting cache.
// Throws ValidationError when a pinned tensor exceeds its level.
Residency place_operands(const workload::Kernel &k, const DeviceRates &dev,
                         const PlacementPolicy &policy = {});

enum class BoundKind : std::uint8_t
{
    compute,
    memory,
    latency,
    network,
};

struct KernelTiming
{
    std::string id;
    int stage = 0;
    std::uint64_t count = 1;  // executions per step (microbatches)
    double time = 0;          // one execution
    BoundKind bound = BoundKind::compute;
    std::int8_t bound_level = -1;
    double flops = 0;
    double useful_flops = 0;
    std::array<double, kMaxLevels> bytes_read{};
    std::array<double, kMaxLevels> bytes_written{};
    workload::KernelRole role = workload::KernelRole::custom;
    workload::Pass pass = workload::Pass::forward;
    bool gemm = false;
    bool communication = false;
};

// t = max(t_compute, max over levels t_mem(level)), where
//   t_compute   = flops / compute_rate
//   t_mem(lvl)  = max(read / (eff * read_bw) + written / (eff * write_bw),
//                     ceil(bytes / granularity) / max_outstanding * latency)
// and the bound class is the maximizing term (ties go to compute).
KernelTiming time_kernel(const workload::Kernel &k, const DeviceRates &dev,
                         const Residency &residency, const MemoryAccessModel &mam,
                         Precision precision);

// Traffic over the busiest link in units of 1/`divisor` byte, plus the
// number of latency-bearing steps on the critical path.
struct CollectiveCost
{
    std::uint64_t link_traffic = 0;
    std::uint64_t divisor = 1;
    std::uint64_t latency_steps = 0;

    bool operator==(const CollectiveCost &) const = default;
};

CollectiveCost collective_cost(const workload::Kernel &k);
double cost_seconds(const CollectiveCost &cost, double bandwidth, double latency);

// Ring allreduce: 2(n-1)/n * payload / bw + 2(n-1) * latency.
// Ring allgather: (n-1)/n * payload / bw + (n-1) * latency.
// Point-to-point: payload / bw + latency. Groups of one cost nothing.
double time_collective(const workload::Kernel &k, const hw::InterconnectSpec &net);

struct PipelineTime
{
    double total = 0;
    double bubble = 0;
};

// Synchronous fill-drain: sum(stage) + (microbatches - 1) * max(stage);
// bubble = total - microbatches * mean(stage). Throws on empty input.
PipelineTime time_pipeline(std::span<const double> stage_times, int microbatches);

struct PerfReport
{
    double total_time = 0;
    double compute_time = 0;
    double communication_time = 0;
    double other_time = 0;
    double bubble_time = 0;
    double weight_update_time = 0;
    double useful_flops = 0;
    double achieved_flops_per_device = 0;
    int device_count = 1;
    std::vector<std::string> level_names;
    std::vector<KernelTiming> kernels;
    std::map<std::string, double> bound_fractions;
    mapping::FootprintReport footprint;
    mapping::FitReport fit;
};

PerfReport evaluate(const mapping::MappedGraph &mg, const hw::SystemSpec &sys,
                    const MemoryAccessModel &mam, const PlacementPolicy &policy = {});

// "compute", "memory@L2", "latency@DRAM", "network"
std::string bound_label(const KernelTiming &t, const std::vector<std::string> &level_names);

using KernelFilter = std::function<bool(const KernelTiming &)>;
// Time fractions by bound label over the filtered kernels; empty map when
// nothing matches or no time accrues.
std::map<std::string, double> boundedness_profile(const PerfReport &report,
                                                  const KernelFilter &filter);
// Forward (or prefill) gemm kernels.
bool is_forward_gemm(const KernelTiming &t);
// Share of the profile bound by data movement (memory@* plus latency@*).
double memory_bound_fraction(const std::map<std::string, double> &profile);

std::string_view to_string(BoundKind b);

json to_json(const MemoryAccessModel &mam);
MemoryAccessModel memory_access_from_json(const json &doc,
                                          const std::string &path = "memory_access");
json to_json(const PlacementPolicy &p);
PlacementPolicy placement_from_json(const json &doc, const std::string &path = "placement");
json to_json(const PerfReport &r, bool include_kernels = true);

}  // namespace llmperf::engine
