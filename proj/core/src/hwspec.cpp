// SPDX-FileCopyrightText: © 2026 The llmperf Authors
//
// SPDX-License-Identifier: Apache-2.0
#include "llmperf/hwspec.hpp"

#include <algorithm>
#include <array>

namespace llmperf::hw
{

namespace
{

constexpr std::array<std::pair<MemoryScope, std::string_view>, 3> kScopeNames{{
    {MemoryScope::per_core, "per-core"},
    {MemoryScope::per_device, "per-device"},
    {MemoryScope::shared_pool, "shared-pool"},
}};

constexpr std::array<std::pair<Topology, std::string_view>, 3> kTopologyNames{{
    {Topology::torus2d, "torus2d"},
    {Topology::switched, "switch"},
    {Topology::fully_connected_abstract, "fully-connected-abstract"},
}};

template <typename Enum, std::size_t N>
Enum parse_enum(const std::array<std::pair<Enum, std::string_view>, N> &table, const std::string &text,
                const std::string &path)
{
    for (const auto &[value, name] : table)
        if (name == text)
            return value;
    std::string options;
    for (const auto &[value, name] : table)
        options += (options.empty() ? "" : ", ") + std::string(name);
    throw ParseError(path + ": unknown value '" + text + "' (expected " + options + ")");
}

// SPU: 2.45 PFLOP/s bf16 at 80% MAC utilization; L1 from the stacked HD JSRAM
// dies, L2 as the blade-wide SNU JSRAM slices.
SystemSpec scd_blade()
{
    SystemSpec s;
    s.name = "scd-blade";
    s.device.name = "spu";
    s.device.clock = 30e9;
    s.device.peak_flops_by_precision = {{Precision::bf16, 2.45e15}};
    s.device.utilization_ceiling = 0.8;
    s.device.memory_levels = {
        {"L1", 256e6, 128e12, 128e12, 0.5e-9, MemoryScope::per_device},
        {"L2", 4.19e9, 64e12, 64e12, 2e-9, MemoryScope::shared_pool},
    };
    s.device_count = 64;
    // 8 x 8 torus; ~2,100 wires per link direction at 30 Gb/s each.
    s.interconnect.topology = Topology::torus2d;
    s.interconnect.grid = {8, 8};
    s.interconnect.link_bandwidth = 8e12;
    s.interconnect.link_latency = 50e-9;
    s.interconnect.per_device_injection_bandwidth = 32e12;
    // Cryo-DRAM behind the datalink: 20 TB/s downlink (read), 10 TB/s uplink
    // (write) for the whole blade.
    s.main_memory.capacity = 2e12;
    s.main_memory.total_read_bandwidth = 20e12;
    s.main_memory.total_write_bandwidth = 10e12;
    s.main_memory.per_device_bandwidth = 0.47e12;
    s.main_memory.access_latency = 30e-9;
    return s;
}

// 64 H100-class GPUs: each with 80 GB HBM at 3.35 TB/s and a 50 MB L2.
SystemSpec h100_system()
{
    constexpr int kGpus = 64;
    SystemSpec s;
    s.name = "h100-node";
    s.device.name = "h100";
    s.device.clock = 1.83e9;
    s.device.peak_flops_by_precision = {{Precision::bf16, 0.9895e15}};
    s.device.utilization_ceiling = 0.8;
    s.device.memory_levels = {
        {"L2", 50e6, 7e12, 7e12, 5e-9, MemoryScope::per_device},
    };
    s.device_count = kGpus;
    s.interconnect.topology = Topology::switched;
    s.interconnect.link_bandwidth = 0.45e12;
    s.interconnect.link_latency = 0.7e-6;
    s.interconnect.per_device_injection_bandwidth = 0.45e12;
    s.main_memory.capacity = kGpus * 80e9;
    s.main_memory.total_read_bandwidth = kGpus * 3.35e12;
    s.main_memory.total_write_bandwidth = kGpus * 3.35e12;
    s.main_memory.per_device_bandwidth = 3.35e12;
    s.main_memory.access_latency = 100e-9;
    return s;
}

SystemSpec with_overrides(const SystemSpec &base, const json &overrides)
{
    if (overrides.is_null() || (overrides.is_object() && overrides.empty()))
    {
        throw_if_invalid(validate_system(base));
        return base;
    }
    json doc = to_json(base);
    merge_existing(doc, overrides);
    SystemSpec spec = system_from_json(doc);
    throw_if_invalid(validate_system(spec));
    return spec;
}

void check_positive(Violations &out, const std::string &field, double value)
{
    if (!(value > 0))
        out.push_back({field, field + " must be > 0"});
}

void check_non_negative(Violations &out, const std::string &field, double value)
{
    if (!(value >= 0))
        out.push_back({field, field + " must be >= 0"});
}

}  // namespace

double DeviceSpec::peak_flops(Precision p) const
{
    auto it = peak_flops_by_precision.find(p);
    if (it == peak_flops_by_precision.end())
        throw ValidationError("device.peak_flops_by_precision",
                              "no peak throughput for precision " + std::string(llmperf::to_string(p)));
    return it->second;
}

const MemoryLevel *DeviceSpec::find_level(std::string_view level_name) const
{
    for (const auto &level : memory_levels)
        if (level.name == level_name)
            return &level;
    return nullptr;
}

Violations validate_system(const SystemSpec &spec)
{
    Violations v;
    if (spec.device_count < 1)
        v.push_back({"device_count", "device_count must be ≥ 1"});

    const DeviceSpec &d = spec.device;
    check_positive(v, "device.clock", d.clock);
    if (d.peak_flops_by_precision.empty())
        v.push_back({"device.peak_flops_by_precision", "device.peak_flops_by_precision must not be empty"});
    for (const auto &[precision, flops] : d.peak_flops_by_precision)
        check_positive(v, "device.peak_flops_by_precision." + std::string(llmperf::to_string(precision)), flops);
    if (!(d.utilization_ceiling > 0 && d.utilization_ceiling <= 1))
        v.push_back({"device.utilization_ceiling", "device.utilization_ceiling must be in (0, 1]"});
    if (d.memory_levels.size() > 3)
        v.push_back({"device.memory_levels", "device.memory_levels supports at most 3 levels"});

    // Capacity must not shrink and bandwidth must not grow walking outward,
    // ending at main memory. Pairs with an already-invalid value are skipped
    // so each bad field reports once.
    struct Rung
    {
        std::string path;
        double capacity, read_bw, write_bw;
    };
    std::vector<Rung> rungs;
    for (const auto &level : d.memory_levels)
    {
        std::string path = "device.memory_levels." + level.name;
        check_positive(v, path + ".capacity", level.capacity);
        check_positive(v, path + ".read_bandwidth", level.read_bandwidth);
        check_positive(v, path + ".write_bandwidth", level.write_bandwidth);
        check_non_negative(v, path + ".access_latency", level.access_latency);
        rungs.push_back({path, level.capacity, level.read_bandwidth, level.write_bandwidth});
    }

    const MainMemoryPool &mm = spec.main_memory;
    check_positive(v, "main_memory.capacity", mm.capacity);
    check_positive(v, "main_memory.total_read_bandwidth", mm.total_read_bandwidth);
    check_positive(v, "main_memory.total_write_bandwidth", mm.total_write_bandwidth);
    check_positive(v, "main_memory.per_device_bandwidth", mm.per_device_bandwidth);
    check_non_negative(v, "main_memory.access_latency", mm.access_latency);
    rungs.push_back({"main_memory", mm.capacity, mm.per_device_bandwidth, mm.per_device_bandwidth});

    for (std::size_t i = 1; i < rungs.size(); ++i)
    {
        const Rung &inner = rungs[i - 1];
        const Rung &outer = rungs[i];
        if (inner.capacity > 0 && outer.capacity > 0 && outer.capacity < inner.capacity)
            v.push_back({outer.path, outer.path + " capacity must be ≥ that of " + inner.path});
        if (inner.read_bw > 0 && outer.read_bw > 0 && inner.write_bw > 0 && outer.write_bw > 0 &&
            (outer.read_bw > inner.read_bw || outer.write_bw > inner.write_bw))
            v.push_back({outer.path, outer.path + " bandwidth must be ≤ that of " + inner.path});
    }

    const InterconnectSpec &net = spec.interconnect;
    check_positive(v, "interconnect.link_bandwidth", net.link_bandwidth);
    check_non_negative(v, "interconnect.link_latency", net.link_latency);
    check_positive(v, "interconnect.per_device_injection_bandwidth", net.per_device_injection_bandwidth);
    if (net.topology == Topology::torus2d && spec.device_count >= 1)
    {
        long product = 1;
        bool positive = net.grid.size() == 2;
        for (int dim : net.grid)
        {
            positive = positive && dim > 0;
            product *= dim;
        }
        if (!positive || product != spec.device_count)
            v.push_back({"interconnect.grid",
                         "interconnect.grid must have two positive dims whose product equals device_count"});
    }
    return v;
}

SystemSpec build_scd_blade_preset(const json &overrides) { return with_overrides(scd_blade(), overrides); }

SystemSpec build_gpu_baseline_preset(const json &overrides)
{
    return with_overrides(h100_system(), overrides);
}

std::vector<std::string> system_preset_names() { return {"scd-blade", "h100-node"}; }

bool is_system_preset(std::string_view name)
{
    auto names = system_preset_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

SystemSpec system_preset(std::string_view name, const json &overrides)
{
    if (name == "scd-blade")
        return build_scd_blade_preset(overrides);
    if (name == "h100-node")
        return build_gpu_baseline_preset(overrides);
    std::string options;
    for (const auto &n : system_preset_names())
        options += (options.empty() ? "" : ", ") + n;
    throw ValidationError("system", "unknown system preset '" + std::string(name) + "' (available: " + options + ")");
}

double effective_dram_bandwidth(const SystemSpec &spec, int active_devices, Direction direction)
{
    if (active_devices < 1 || active_devices > spec.device_count)
        throw ValidationError("active_devices", "active_devices must be in [1, device_count]");
    const MainMemoryPool &mm = spec.main_memory;
    double total = direction == Direction::read ? mm.total_read_bandwidth : mm.total_write_bandwidth;
    return std::min(mm.per_device_bandwidth, total / active_devices);
}

void lift_pool_caps(SystemSpec &spec)
{
    double lifted = spec.main_memory.per_device_bandwidth * spec.device_count;
    spec.main_memory.total_read_bandwidth = std::max(spec.main_memory.total_read_bandwidth, lifted);
    spec.main_memory.total_write_bandwidth = std::max(spec.main_memory.total_write_bandwidth, lifted);
}

double capacity_share(const SystemSpec &spec, const MemoryLevel &level)
{
    if (level.scope == MemoryScope::shared_pool)
        return level.capacity / spec.device_count;
    return level.capacity;
}

double main_memory_share(const SystemSpec &spec) { return spec.main_memory.capacity / spec.device_count; }

std::string_view to_string(MemoryScope scope)
{
    for (const auto &[value, name] : kScopeNames)
        if (value == scope)
            return name;
    return "unknown";
}

std::string_view to_string(Topology topology)
{
    for (const auto &[value, name] : kTopologyNames)
        if (value == topology)
            return name;
    return "unknown";
}

json to_json(const SystemSpec &spec)
{
    json peaks = json::object();
    for (const auto &[precision, flops] : spec.device.peak_flops_by_precision)
        peaks[std::string(llmperf::to_string(precision))] = flops;

    json levels = json::array();
    for (const auto &l : spec.device.memory_levels)
    {
        levels.push_back({{"name", l.name},
                          {"capacity", l.capacity},
                          {"read_bandwidth", l.read_bandwidth},
                          {"write_bandwidth", l.write_bandwidth},
                          {"access_latency", l.access_latency},
                          {"scope", std::string(to_string(l.scope))}});
    }

    json net = {{"topology", std::string(to_string(spec.interconnect.topology))},
                {"link_bandwidth", spec.interconnect.link_bandwidth},
                {"link_latency", spec.interconnect.link_latency},
                {"per_device_injection_bandwidth", spec.interconnect.per_device_injection_bandwidth}};
    if (!spec.interconnect.grid.empty())
        net["grid"] = spec.interconnect.grid;

    const MainMemoryPool &mm = spec.main_memory;
    return {{"schema_version", kSchemaVersion},
            {"name", spec.name},
            {"device",
             {{"name", spec.device.name},
              {"clock", spec.device.clock},
              {"peak_flops_by_precision", peaks},
              {"utilization_ceiling", spec.device.utilization_ceiling},
              {"memory_levels", levels}}},
            {"device_count", spec.device_count},
            {"interconnect", net},
            {"main_memory",
             {{"capacity", mm.capacity},
              {"total_read_bandwidth", mm.total_read_bandwidth},
              {"total_write_bandwidth", mm.total_write_bandwidth},
              {"per_device_bandwidth", mm.per_device_bandwidth},
              {"access_latency", mm.access_latency}}}};
}

SystemSpec system_from_json(const json &doc, const std::string &path)
{
    FieldReader r(doc, path);
    auto version = r.value_or<int>("schema_version", kSchemaVersion);
    if (version != kSchemaVersion)
        throw ParseError(r.child_path("schema_version") + ": unsupported version " + std::to_string(version));

    SystemSpec s;
    s.name = r.value_or<std::string>("name", "");
    s.device_count = r.required<int>("device_count");

    {
        FieldReader d(r.at("device"), r.child_path("device"));
        s.device.name = d.value_or<std::string>("name", "");
        s.device.clock = d.required<double>("clock");
        s.device.utilization_ceiling = d.required<double>("utilization_ceiling");
        FieldReader peaks(d.at("peak_flops_by_precision"), d.child_path("peak_flops_by_precision"));
        for (const auto &[key, value] : d.at("peak_flops_by_precision").items())
            s.device.peak_flops_by_precision[parse_precision(key)] = peaks.required<double>(key);
        peaks.finish();

        const json &levels = d.at("memory_levels");
        if (!levels.is_array())
            throw ParseError(d.child_path("memory_levels") + ": expected an array");
        for (std::size_t i = 0; i < levels.size(); ++i)
        {
            FieldReader l(levels[i], d.child_path("memory_levels") + "[" + std::to_string(i) + "]");
            MemoryLevel level;
            level.name = l.required<std::string>("name");
            level.capacity = l.required<double>("capacity");
            level.read_bandwidth = l.required<double>("read_bandwidth");
            level.write_bandwidth = l.required<double>("write_bandwidth");
            level.access_latency = l.required<double>("access_latency");
            level.scope = parse_enum(kScopeNames, l.required<std::string>("scope"), l.child_path("scope"));
            l.finish();
            s.device.memory_levels.push_back(std::move(level));
        }
        d.finish();
    }

    {
        FieldReader n(r.at("interconnect"), r.child_path("interconnect"));
        s.interconnect.topology =
            parse_enum(kTopologyNames, n.required<std::string>("topology"), n.child_path("topology"));
        s.interconnect.grid = n.value_or<std::vector<int>>("grid", {});
        s.interconnect.link_bandwidth = n.required<double>("link_bandwidth");
        s.interconnect.link_latency = n.required<double>("link_latency");
        s.interconnect.per_device_injection_bandwidth = n.required<double>("per_device_injection_bandwidth");
        n.finish();
    }

    {
        FieldReader m(r.at("main_memory"), r.child_path("main_memory"));
        s.main_memory.capacity = m.required<double>("capacity");
        s.main_memory.total_read_bandwidth = m.required<double>("total_read_bandwidth");
        s.main_memory.total_write_bandwidth = m.required<double>("total_write_bandwidth");
        s.main_memory.per_device_bandwidth = m.required<double>("per_device_bandwidth");
        s.main_memory.access_latency = m.required<double>("access_latency");
        m.finish();
    }
    r.finish();
    return s;
}

}  // namespace llmperf::hw
