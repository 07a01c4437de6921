// SPDX-FileCopyrightText: © 2026 The llmperf Authors
//
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <functional>

#include "llmperf/hwspec.hpp"

using namespace llmperf;
using namespace llmperf::hw;

TEST(ScdPreset, CoreValues)
{
    SystemSpec s = build_scd_blade_preset();
    EXPECT_EQ(s.device.peak_flops(Precision::bf16), 2.45e15);
    EXPECT_EQ(s.device.utilization_ceiling, 0.8);
    EXPECT_EQ(s.main_memory.per_device_bandwidth, 0.47e12);
    EXPECT_EQ(s.main_memory.total_read_bandwidth, 20e12);
    EXPECT_EQ(s.main_memory.total_write_bandwidth, 10e12);
    EXPECT_EQ(s.main_memory.access_latency, 30e-9);
    EXPECT_EQ(s.main_memory.capacity, 2e12);
    EXPECT_EQ(s.device_count, 64);
    ASSERT_NE(s.device.find_level("L2"), nullptr);
    EXPECT_EQ(s.device.find_level("L2")->capacity, 4.19e9);
    EXPECT_TRUE(validate_system(s).empty());
}

TEST(ScdPreset, OverrideChangesOnlyThatField)
{
    SystemSpec base = build_scd_blade_preset();
    SystemSpec fast = build_scd_blade_preset({{"main_memory", {{"per_device_bandwidth", 16e12}}}});
    EXPECT_EQ(fast.main_memory.per_device_bandwidth, 16e12);
    fast.main_memory.per_device_bandwidth = base.main_memory.per_device_bandwidth;
    EXPECT_EQ(fast, base);
}

TEST(ScdPreset, InvalidOverrideNamesField)
{
    try
    {
        build_scd_blade_preset({{"main_memory", {{"per_device_bandwidth", -1.0}}}});
        FAIL() << "expected a validation error";
    }
    catch (const ValidationError &e)
    {
        EXPECT_EQ(e.field(), "main_memory.per_device_bandwidth");
    }
    EXPECT_THROW(build_scd_blade_preset({{"main_memory", {{"no_such_field", 1}}}}), ValidationError);
}

TEST(GpuPreset, CoreValues)
{
    SystemSpec s = build_gpu_baseline_preset();
    EXPECT_EQ(s.device.peak_flops(Precision::bf16), 0.9895e15);
    EXPECT_EQ(s.main_memory.per_device_bandwidth, 3.35e12);
    EXPECT_EQ(main_memory_share(s), 80e9);
    ASSERT_NE(s.device.find_level("L2"), nullptr);
    EXPECT_EQ(s.device.find_level("L2")->capacity, 50e6);
    EXPECT_TRUE(validate_system(s).empty());
}

TEST(Presets, RoundTrip)
{
    for (const auto &name : system_preset_names())
    {
        SystemSpec s = system_preset(name);
        json doc = to_json(s);
        EXPECT_EQ(system_from_json(doc), s) << name;
        EXPECT_EQ(to_json(system_from_json(json::parse(doc.dump()))), doc) << name;
    }
}

TEST(Presets, UnknownNameListsOptions)
{
    try
    {
        system_preset("tpu");
        FAIL();
    }
    catch (const ValidationError &e)
    {
        EXPECT_NE(std::string(e.what()).find("scd-blade"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("h100-node"), std::string::npos);
    }
}

TEST(ValidateSystem, DeviceCountZero)
{
    SystemSpec s = build_scd_blade_preset();
    s.device_count = 0;
    Violations v = validate_system(s);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].field, "device_count");
    EXPECT_EQ(v[0].rule, "device_count must be ≥ 1");
}

TEST(ValidateSystem, TorusGridMismatch)
{
    SystemSpec s = build_scd_blade_preset();
    s.device_count = 63;
    Violations v = validate_system(s);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].field, "interconnect.grid");
}

TEST(ValidateSystem, HierarchyOrdering)
{
    SystemSpec s = build_scd_blade_preset();
    s.device.memory_levels[1].capacity = 1e6;  // L2 smaller than L1
    Violations v = validate_system(s);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].field, "device.memory_levels.L2");

    s = build_scd_blade_preset();
    s.main_memory.per_device_bandwidth = 100e12;  // DRAM faster than L2
    v = validate_system(s);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].field, "main_memory");
}

// Every numeric field pushed below its lower bound breaks exactly one rule,
// and that rule names the field.
TEST(ValidateSystem, SingleFieldMutationGivesOneViolation)
{
    struct Mutation
    {
        std::string field;
        std::function<void(SystemSpec &)> apply;
    };
    std::vector<Mutation> mutations = {
        {"device_count", [](SystemSpec &s) { s.device_count = 0; }},
        {"device.clock", [](SystemSpec &s) { s.device.clock = 0; }},
        {"device.peak_flops_by_precision.bf16", [](SystemSpec &s) { s.device.peak_flops_by_precision[Precision::bf16] = 0; }},
        {"device.utilization_ceiling", [](SystemSpec &s) { s.device.utilization_ceiling = 0; }},
        {"interconnect.link_bandwidth", [](SystemSpec &s) { s.interconnect.link_bandwidth = 0; }},
        {"interconnect.link_latency", [](SystemSpec &s) { s.interconnect.link_latency = -1e-9; }},
        {"interconnect.per_device_injection_bandwidth",
         [](SystemSpec &s) { s.interconnect.per_device_injection_bandwidth = 0; }},
        {"main_memory.capacity", [](SystemSpec &s) { s.main_memory.capacity = 0; }},
        {"main_memory.total_read_bandwidth", [](SystemSpec &s) { s.main_memory.total_read_bandwidth = 0; }},
        {"main_memory.total_write_bandwidth", [](SystemSpec &s) { s.main_memory.total_write_bandwidth = 0; }},
        {"main_memory.per_device_bandwidth", [](SystemSpec &s) { s.main_memory.per_device_bandwidth = 0; }},
        {"main_memory.access_latency", [](SystemSpec &s) { s.main_memory.access_latency = -1e-9; }},
    };
    for (std::size_t i = 0; i < 2; ++i)
    {
        const std::string path = "device.memory_levels." + std::string(i == 0 ? "L1" : "L2");
        mutations.push_back({path + ".capacity", [i](SystemSpec &s) { s.device.memory_levels[i].capacity = 0; }});
        mutations.push_back(
            {path + ".read_bandwidth", [i](SystemSpec &s) { s.device.memory_levels[i].read_bandwidth = 0; }});
        mutations.push_back(
            {path + ".write_bandwidth", [i](SystemSpec &s) { s.device.memory_levels[i].write_bandwidth = 0; }});
        mutations.push_back(
            {path + ".access_latency", [i](SystemSpec &s) { s.device.memory_levels[i].access_latency = -1; }});
    }
    for (const auto &name : system_preset_names())
    {
        for (const auto &m : mutations)
        {
            SystemSpec s = system_preset(name);
            if (m.field.find("memory_levels.L1") != std::string::npos && !s.device.find_level("L1"))
                continue;
            if (name == "h100-node" && m.field.find("memory_levels.L2") != std::string::npos)
            {
                // the GPU's only level sits at index 0
                SystemSpec g = s;
                std::string f = m.field;
                if (f.ends_with(".capacity"))
                    g.device.memory_levels[0].capacity = 0;
                else if (f.ends_with(".read_bandwidth"))
                    g.device.memory_levels[0].read_bandwidth = 0;
                else if (f.ends_with(".write_bandwidth"))
                    g.device.memory_levels[0].write_bandwidth = 0;
                else
                    g.device.memory_levels[0].access_latency = -1;
                Violations v = validate_system(g);
                ASSERT_EQ(v.size(), 1u) << name << " " << m.field;
                EXPECT_EQ(v[0].field, m.field);
                continue;
            }
            m.apply(s);
            Violations v = validate_system(s);
            ASSERT_EQ(v.size(), 1u) << name << " " << m.field;
            EXPECT_EQ(v[0].field, m.field) << name;
        }
    }
}

TEST(EffectiveDramBandwidth, Examples)
{
    SystemSpec s = build_scd_blade_preset();
    EXPECT_DOUBLE_EQ(effective_dram_bandwidth(s, 64, Direction::read), 20e12 / 64);
    EXPECT_DOUBLE_EQ(effective_dram_bandwidth(s, 64, Direction::write), 10e12 / 64);
    EXPECT_EQ(effective_dram_bandwidth(s, 1, Direction::read), 0.47e12);

    SystemSpec g = build_gpu_baseline_preset();
    EXPECT_EQ(effective_dram_bandwidth(g, g.device_count, Direction::read), g.main_memory.per_device_bandwidth);
    EXPECT_THROW(effective_dram_bandwidth(s, 0, Direction::read), ValidationError);
    EXPECT_THROW(effective_dram_bandwidth(s, 65, Direction::read), ValidationError);
}

TEST(EffectiveDramBandwidth, NonIncreasingAndCapped)
{
    for (const auto &name : system_preset_names())
    {
        SystemSpec s = system_preset(name);
        for (Direction d : {Direction::read, Direction::write})
        {
            double prev = effective_dram_bandwidth(s, 1, d);
            for (int n = 1; n <= s.device_count; ++n)
            {
                double bw = effective_dram_bandwidth(s, n, d);
                EXPECT_LE(bw, prev);
                EXPECT_LE(bw, s.main_memory.per_device_bandwidth);
                prev = bw;
            }
        }
    }
}

TEST(LiftPoolCaps, PerDeviceBecomesEffective)
{
    SystemSpec s = build_scd_blade_preset({{"main_memory", {{"per_device_bandwidth", 16e12}}}});
    EXPECT_LT(effective_dram_bandwidth(s, 64, Direction::read), 16e12);
    lift_pool_caps(s);
    EXPECT_EQ(effective_dram_bandwidth(s, 64, Direction::read), 16e12);
    EXPECT_EQ(effective_dram_bandwidth(s, 64, Direction::write), 16e12);
    EXPECT_TRUE(validate_system(s).empty());
}

TEST(CapacityShare, SharedPoolSplitsAcrossDevices)
{
    SystemSpec s = build_scd_blade_preset();
    EXPECT_DOUBLE_EQ(capacity_share(s, *s.device.find_level("L2")), 4.19e9 / 64);
    EXPECT_EQ(capacity_share(s, *s.device.find_level("L1")), 256e6);
    EXPECT_DOUBLE_EQ(main_memory_share(s), 2e12 / 64);
}

TEST(SystemJson, RejectsUnknownFieldsAndBadEnums)
{
    json doc = to_json(build_scd_blade_preset());
    doc["device"]["colour"] = "blue";
    EXPECT_THROW(system_from_json(doc), ParseError);
    doc = to_json(build_scd_blade_preset());
    doc["interconnect"]["topology"] = "hypercube";
    EXPECT_THROW(system_from_json(doc), ParseError);
}

TEST(JsonText, MalformedReportsLineAndColumn)
{
    try
    {
        parse_json_text("{\n  \"a\": 1,\n  \"b\": ]\n}", "inline.json");
        FAIL();
    }
    catch (const ParseError &e)
    {
        std::string what = e.what();
        EXPECT_NE(what.find("inline.json:3:"), std::string::npos) << what;
    }
}

TEST(JsonText, SetDottedRequiresExistingPath)
{
    json doc = {{"a", {{"b", 1}}}};
    set_dotted(doc, "a.b", 2);
    EXPECT_EQ(doc["a"]["b"], 2);
    EXPECT_THROW(set_dotted(doc, "a.c", 3), Error);
    EXPECT_THROW(set_dotted(doc, "x.b", 3), Error);
}
