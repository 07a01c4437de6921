// SPDX-FileCopyrightText: © 2026 The llmperf Authors
//
// SPDX-License-Identifier: Apache-2.0
#include "llmperf/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace llmperf::engine
{

using namespace llmperf::workload;

Violations validate_memory_access(const MemoryAccessModel &mam)
{
    Violations v;
    if (mam.request_granularity < 1)
        v.push_back({"memory_access.request_granularity", "request_granularity must be > 0"});
    if (mam.max_outstanding < 1)
        v.push_back({"memory_access.max_outstanding", "max_outstanding must be > 0"});
    if (!(mam.bandwidth_efficiency > 0 && mam.bandwidth_efficiency <= 1))
        v.push_back({"memory_access.bandwidth_efficiency", "bandwidth_efficiency must be in (0, 1]"});
    return v;
}

std::optional<std::size_t> DeviceRates::find(const std::string &name) const
{
    for (std::size_t i = 0; i < levels.size(); ++i)
        if (levels[i].name == name)
            return i;
    return std::nullopt;
}

DeviceRates resolve_device(const hw::SystemSpec &sys, Precision precision, int active_devices)
{
    DeviceRates dev;
    dev.compute_rate = sys.device.peak_flops(precision) * sys.device.utilization_ceiling;
    if (sys.device.memory_levels.size() + 1 > kMaxLevels)
        throw ValidationError("device.memory_levels", "too many memory levels");
    for (const auto &level : sys.device.memory_levels)
        dev.levels.push_back({level.name, level.read_bandwidth, level.write_bandwidth, level.access_latency,
                              hw::capacity_share(sys, level)});
    dev.levels.push_back({"DRAM", hw::effective_dram_bandwidth(sys, active_devices, hw::Direction::read),
                          hw::effective_dram_bandwidth(sys, active_devices, hw::Direction::write),
                          sys.main_memory.access_latency, hw::main_memory_share(sys)});
    return dev;
}

namespace
{

// Innermost on-device level with room for `bytes`, else main memory.
std::uint8_t innermost_fitting(const DeviceRates &dev, double bytes)
{
    for (std::size_t i = 0; i < dev.main_memory(); ++i)
        if (bytes <= dev.levels[i].capacity_share)
            return static_cast<std::uint8_t>(i);
    return static_cast<std::uint8_t>(dev.main_memory());
}

}  // namespace

Residency place_operands(const Kernel &k, const DeviceRates &dev, const PlacementPolicy &policy)
{
    const auto main = static_cast<std::uint8_t>(dev.main_memory());
    std::optional<std::uint8_t> kv_pin;
    if (policy.kv_level)
    {
        auto idx = dev.find(*policy.kv_level);
        if (!idx)
            throw ValidationError("placement.kv_level", "unknown memory level '" + *policy.kv_level + "'");
        kv_pin = static_cast<std::uint8_t>(*idx);
    }

    double live = 0;
    for (const auto &op : k.operands)
        if (op.tensor == TensorClass::activation)
            live += static_cast<double>(op.bytes);
    const std::uint8_t activation_level = innermost_fitting(dev, live);

    Residency r;
    r.reserve(k.operands.size());
    for (const auto &op : k.operands)
    {
        if (op.hint == ResidencyHint::streamed)
        {
            r.push_back(main);
            continue;
        }
        if (op.hint == ResidencyHint::cacheable)
        {
            r.push_back(innermost_fitting(dev, static_cast<double>(op.bytes)));
            continue;
        }
        switch (op.tensor)
        {
            case TensorClass::activation: r.push_back(activation_level); break;
            case TensorClass::kv_cache:
                if (kv_pin)
                {
                    if (static_cast<double>(op.bytes) > dev.levels[*kv_pin].capacity_share)
                        throw ValidationError("placement.kv_level", "KV tensor of " + k.id + " exceeds level " +
                                                                        dev.levels[*kv_pin].name);
                    r.push_back(*kv_pin);
                }
                else
                {
                    r.push_back(main);
                }
                break;
            default: r.push_back(main); break;
        }
    }
    return r;
}

KernelTiming time_kernel(const Kernel &k, const DeviceRates &dev, const Residency &residency,
                         const MemoryAccessModel &mam, Precision precision)
{
    KernelTiming t;
    t.id = k.id;
    t.role = k.role;
    t.pass = k.pass;
    t.gemm = k.is_gemm();
    t.communication = k.is_communication();
    t.flops = static_cast<double>(kernel_flops(k));
    t.useful_flops = static_cast<double>(k.useful_flops);
    (void)precision;

    if (residency.size() != k.operands.size())
        throw ValidationError("residency", "kernel " + k.id + " needs one level per operand");
    if (dev.levels.size() > kMaxLevels)
        throw ValidationError("residency", "too many memory levels");
    for (std::size_t i = 0; i < k.operands.size(); ++i)
    {
        if (residency[i] >= dev.levels.size())
            throw ValidationError("residency", "kernel " + k.id + " names an unknown memory level");
        const Operand &op = k.operands[i];
        (op.access == Access::read ? t.bytes_read : t.bytes_written)[residency[i]] += static_cast<double>(op.bytes);
    }

    const double t_compute = t.flops > 0 ? t.flops / dev.compute_rate : 0.0;
    t.time = t_compute;
    t.bound = BoundKind::compute;
    const double eff = mam.bandwidth_efficiency;
    for (std::size_t l = 0; l < dev.levels.size(); ++l)
    {
        const double read = t.bytes_read[l], written = t.bytes_written[l];
        if (read <= 0 && written <= 0)
            continue;
        const LevelRates &level = dev.levels[l];
        const double t_bw = read / (eff * level.read_bandwidth) + written / (eff * level.write_bandwidth);
        const double requests = std::ceil((read + written) / static_cast<double>(mam.request_granularity));
        const double t_lat = requests / mam.max_outstanding * level.latency;
        if (t_bw > t.time)
        {
            t.time = t_bw;
            t.bound = BoundKind::memory;
            t.bound_level = static_cast<std::int8_t>(l);
        }
        if (t_lat > t.time)
        {
            t.time = t_lat;
            t.bound = BoundKind::latency;
            t.bound_level = static_cast<std::int8_t>(l);
        }
    }
    return t;
}

CollectiveCost collective_cost(const Kernel &k)
{
    if (const auto *c = std::get_if<Collective>(&k.kind))
    {
        const std::uint64_t n = static_cast<std::uint64_t>(std::max(c->group_size, 1));
        if (n == 1)
            return {0, 1, 0};
        if (c->op == CollectiveOp::allreduce)
            return {2 * (n - 1) * c->payload, n, 2 * (n - 1)};
        return {(n - 1) * c->payload, n, n - 1};
    }
    if (const auto *p = std::get_if<P2P>(&k.kind))
        return {p->payload, 1, 1};
    return {0, 1, 0};
}

double cost_seconds(const CollectiveCost &cost, double bandwidth, double latency)
{
    double transfer = cost.link_traffic == 0
                          ? 0.0
                          : static_cast<double>(cost.link_traffic) / (static_cast<double>(cost.divisor) * bandwidth);
    return transfer + static_cast<double>(cost.latency_steps) * latency;
}

double time_collective(const Kernel &k, const hw::InterconnectSpec &net)
{
    const double bw = std::min(net.link_bandwidth, net.per_device_injection_bandwidth);
    return cost_seconds(collective_cost(k), bw, net.link_latency);
}

PipelineTime time_pipeline(std::span<const double> stage_times, int microbatches)
{
    if (stage_times.empty())
        throw ValidationError("stage_times", "pipeline needs at least one stage");
    if (microbatches < 1)
        throw ValidationError("microbatches", "microbatches must be >= 1");
    const double sum = std::accumulate(stage_times.begin(), stage_times.end(), 0.0);
    const double slowest = *std::max_element(stage_times.begin(), stage_times.end());
    PipelineTime p;
    p.total = sum + (microbatches - 1) * slowest;
    if (stage_times.size() == 1)
        return p;
    const double mean = sum / static_cast<double>(stage_times.size());
    p.bubble = std::max(0.0, p.total - microbatches * mean);
    return p;
}

PerfReport evaluate(const mapping::MappedGraph &mg, const hw::SystemSpec &sys, const MemoryAccessModel &mam,
                    const PlacementPolicy &policy)
{
    throw_if_invalid(validate_memory_access(mam));
    throw_if_invalid(hw::validate_system(sys));

    PerfReport report;
    report.device_count = sys.device_count;
    report.footprint = mapping::memory_footprint(mg);
    report.fit = mapping::check_fit(report.footprint, sys);
    if (mg.stages.empty())
        return report;
    throw_if_invalid(mapping::validate_mapping(mg.mapping, mg.model, mg.source.batch, mg.phase(), sys));

    const Precision precision = mg.source.precision;
    const DeviceRates dev = resolve_device(sys, precision, mg.mapping.devices());
    for (const auto &l : dev.levels)
        report.level_names.push_back(l.name);

    if (policy.kv_level)
    {
        auto idx = dev.find(*policy.kv_level);
        if (!idx)
            throw ValidationError("placement.kv_level", "unknown memory level '" + *policy.kv_level + "'");
        const double share = dev.levels[*idx].capacity_share;
        if (report.footprint.per_device.kv_cache > share)
            throw ValidationError("placement.kv_level",
                                  "KV-cache shard does not fit in " + *policy.kv_level + " (" +
                                      std::to_string(report.footprint.per_device.kv_cache) + " > " +
                                      std::to_string(share) + " bytes)");
    }

    auto time_one = [&](const Kernel &k, int stage, std::uint64_t count) {
        KernelTiming t;
        if (k.is_communication())
        {
            t.id = k.id;
            t.role = k.role;
            t.pass = k.pass;
            t.communication = true;
            t.time = time_collective(k, sys.interconnect);
            t.bound = BoundKind::network;
        }
        else
        {
            t = time_kernel(k, dev, place_operands(k, dev, policy), mam, precision);
        }
        t.stage = stage;
        t.count = count;
        report.kernels.push_back(std::move(t));
        return report.kernels.back();
    };

    const std::size_t p = mg.stages.size();
    const auto m = static_cast<std::uint64_t>(mg.microbatches);
    std::vector<double> stage_time(p, 0), stage_compute(p, 0), stage_comm(p, 0), step_comm(p, 0),
        step_update(p, 0);
    for (std::size_t s = 0; s < p; ++s)
    {
        for (const auto &k : mg.stages[s].per_microbatch.kernels)
        {
            const KernelTiming &t = time_one(k, static_cast<int>(s), m);
            (t.communication ? stage_comm[s] : stage_compute[s]) += t.time;
        }
        stage_time[s] = stage_compute[s] + stage_comm[s];
        for (const auto &k : mg.stages[s].per_step.kernels)
        {
            const KernelTiming &t = time_one(k, static_cast<int>(s), 1);
            (t.communication ? step_comm[s] : step_update[s]) += t.time;
        }
    }

    const double compute_sum = std::accumulate(stage_compute.begin(), stage_compute.end(), 0.0);
    const double comm_sum = std::accumulate(stage_comm.begin(), stage_comm.end(), 0.0);
    if (mg.phase() == Phase::training)
    {
        const PipelineTime pipe = time_pipeline(stage_time, mg.microbatches);
        // Stages synchronize their gradients and update in parallel; the
        // slowest stage sets the step tail.
        std::size_t tail = 0;
        for (std::size_t s = 1; s < p; ++s)
            if (step_comm[s] + step_update[s] > step_comm[tail] + step_update[tail])
                tail = s;
        const double mean_factor = static_cast<double>(m) / static_cast<double>(p);
        report.compute_time = compute_sum * mean_factor;
        report.communication_time = comm_sum * mean_factor + step_comm[tail];
        report.bubble_time = pipe.bubble;
        report.weight_update_time = step_update[tail];
        report.other_time = report.bubble_time + report.weight_update_time;
    }
    else
    {
        report.compute_time = compute_sum;
        report.communication_time = comm_sum;
    }
    report.total_time = report.compute_time + report.communication_time + report.other_time;
    report.useful_flops = to_double(mg.unsharded_useful_flops);
    if (report.total_time > 0)
        report.achieved_flops_per_device = report.useful_flops / (report.total_time * report.device_count);
    report.bound_fractions = boundedness_profile(report, [](const KernelTiming &) { return true; });
    return report;
}

std::string bound_label(const KernelTiming &t, const std::vector<std::string> &level_names)
{
    auto level = [&]() -> std::string {
        if (t.bound_level >= 0 && static_cast<std::size_t>(t.bound_level) < level_names.size())
            return level_names[t.bound_level];
        return std::to_string(t.bound_level);
    };
    switch (t.bound)
    {
        case BoundKind::compute: return "compute";
        case BoundKind::memory: return "memory@" + level();
        case BoundKind::latency: return "latency@" + level();
        case BoundKind::network: return "network";
    }
    return "unknown";
}

std::map<std::string, double> boundedness_profile(const PerfReport &report, const KernelFilter &filter)
{
    std::map<std::string, double> profile;
    double total = 0;
    for (const auto &t : report.kernels)
    {
        if (!filter(t))
            continue;
        const double w = t.time * static_cast<double>(t.count);
        if (w <= 0)
            continue;
        profile[bound_label(t, report.level_names)] += w;
        total += w;
    }
    if (total <= 0)
        return {};
    for (auto &[label, value] : profile)
        value /= total;
    return profile;
}

bool is_forward_gemm(const KernelTiming &t)
{
    return t.gemm && (t.pass == Pass::forward || t.pass == Pass::prefill);
}

double memory_bound_fraction(const std::map<std::string, double> &profile)
{
    double sum = 0;
    for (const auto &[label, value] : profile)
        if (label.rfind("memory@", 0) == 0 || label.rfind("latency@", 0) == 0)
            sum += value;
    return sum;
}

std::string_view to_string(BoundKind b)
{
    switch (b)
    {
        case BoundKind::compute: return "compute";
        case BoundKind::memory: return "memory";
        case BoundKind::latency: return "latency";
        case BoundKind::network: return "network";
    }
    return "unknown";
}

json to_json(const MemoryAccessModel &mam)
{
    return {{"request_granularity", mam.request_granularity},
            {"max_outstanding", mam.max_outstanding},
            {"bandwidth_efficiency", mam.bandwidth_efficiency}};
}

MemoryAccessModel memory_access_from_json(const json &doc, const std::string &path)
{
    FieldReader r(doc, path);
    MemoryAccessModel mam;
    mam.request_granularity = r.value_or("request_granularity", mam.request_granularity);
    mam.max_outstanding = r.value_or("max_outstanding", mam.max_outstanding);
    mam.bandwidth_efficiency = r.value_or("bandwidth_efficiency", mam.bandwidth_efficiency);
    r.finish();
    return mam;
}

json to_json(const PlacementPolicy &p)
{
    return {{"kv_level", p.kv_level ? json(*p.kv_level) : json(nullptr)}};
}

PlacementPolicy placement_from_json(const json &doc, const std::string &path)
{
    FieldReader r(doc, path);
    PlacementPolicy p;
    p.kv_level = r.optional<std::string>("kv_level");
    r.finish();
    return p;
}

json to_json(const PerfReport &r, bool include_kernels)
{
    json doc = {{"total_time", r.total_time},
                {"compute_time", r.compute_time},
                {"communication_time", r.communication_time},
                {"other_time", r.other_time},
                {"bubble_time", r.bubble_time},
                {"weight_update_time", r.weight_update_time},
                {"useful_flops", r.useful_flops},
                {"achieved_flops_per_device", r.achieved_flops_per_device},
                {"device_count", r.device_count},
                {"bound_fractions", r.bound_fractions},
                {"forward_gemm_profile", boundedness_profile(r, is_forward_gemm)},
                {"footprint", mapping::to_json(r.footprint)},
                {"fit", mapping::to_json(r.fit)}};
    if (include_kernels)
    {
        json kernels = json::array();
        for (const auto &t : r.kernels)
        {
            json bytes = json::object();
            for (std::size_t l = 0; l < r.level_names.size() && l < kMaxLevels; ++l)
                if (t.bytes_read[l] > 0 || t.bytes_written[l] > 0)
                    bytes[r.level_names[l]] = {{"read", t.bytes_read[l]}, {"written", t.bytes_written[l]}};
            kernels.push_back({{"id", t.id},
                               {"stage", t.stage},
                               {"count", t.count},
                               {"time", t.time},
                               {"bound", bound_label(t, r.level_names)},
                               {"flops", t.flops},
                               {"useful_flops", t.useful_flops},
                               {"bytes", std::move(bytes)}});
        }
        doc["kernels"] = std::move(kernels);
    }
    return doc;
}

}  // namespace llmperf::engine
