// SPDX-FileCopyrightText: © 2026 The llmperf Authors
//
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "llmperf/report_io.hpp"
#include "llmperf/scenario.hpp"
#include "llmperf/studies.hpp"

using namespace llmperf;
using namespace llmperf::scenario;

namespace
{

const std::string kPlans = LLMPERF_PLANS_DIR;

json small_training()
{
    return {{"name", "small"},
            {"system", "scd-blade"},
            {"model", "gpt3-18b"},
            {"workload", {{"phase", "training"}, {"batch", 64}, {"seq_len", 2048}, {"microbatches", 8}}},
            {"mapping", {{"tp", 8}, {"pp", 8}, {"dp", 1}}}};
}

}  // namespace

TEST(Scenario, ResolvesPresetsAndInlineParts)
{
    Scenario s = build(source_from_json(small_training()));
    EXPECT_EQ(s.system.name, "scd-blade");
    EXPECT_EQ(s.model.name, "gpt3-18b");
    EXPECT_EQ(s.workload.batch, 64u);
    EXPECT_EQ(s.mapping.microbatches, 8);  // taken from the workload
    EXPECT_FALSE(s.lift_pool_caps);
    EXPECT_TRUE(validate(s).empty());
}

TEST(Scenario, OverridesApplyInOrder)
{
    json doc = small_training();
    doc["overrides"] = {{"system.main_memory.per_device_bandwidth", 4e12}};
    Scenario s = build(source_from_json(doc), {{"system.main_memory.per_device_bandwidth", 8e12}});
    EXPECT_EQ(s.system.main_memory.per_device_bandwidth, 8e12);
    EXPECT_EQ(s.overrides.at("system.main_memory.per_device_bandwidth"), 8e12);

    EXPECT_THROW(build(source_from_json(doc), {{"system.main_memory.no_such", 1}}), Error);
}

TEST(Scenario, ParseAssignment)
{
    Override o = parse_assignment("workload.batch=16");
    EXPECT_EQ(o.first, "workload.batch");
    EXPECT_EQ(o.second, 16);
    o = parse_assignment("system=h100-node");
    EXPECT_EQ(o.second, "h100-node");
    EXPECT_THROW(parse_assignment("novalue"), ParseError);
}

TEST(Scenario, MicrobatchMismatchIsRejected)
{
    json doc = small_training();
    doc["mapping"]["microbatches"] = 4;
    Violations v = check(source_from_json(doc));
    ASSERT_FALSE(v.empty());
    EXPECT_EQ(v[0].field, "mapping.microbatches");
    EXPECT_THROW(build(source_from_json(doc)), ValidationError);
}

TEST(Scenario, DeviceCountMismatchIsRejected)
{
    json doc = small_training();
    doc["mapping"]["tp"] = 4;
    Violations v = check(source_from_json(doc));
    ASSERT_FALSE(v.empty());
    bool found = false;
    for (const auto &x : v)
        found = found || x.field.rfind("mapping", 0) == 0;
    EXPECT_TRUE(found);
}

TEST(Scenario, LoadsPlanFilesWithRelativeReferences)
{
    Scenario s = build(load_source(kPlans + "/scenarios/infer_bandwidth_base.json"));
    EXPECT_EQ(s.model.name, "llama-405b");
    EXPECT_EQ(s.mapping.tp, 64);
    EXPECT_TRUE(s.lift_pool_caps);
    EXPECT_EQ(s.system.main_memory.per_device_bandwidth, 16e12);
}

TEST(Scenario, EvaluatorCachesAndMatchesDirectEvaluation)
{
    Scenario s = build(source_from_json(small_training()));
    Evaluator ev;
    engine::PerfReport a = ev.evaluate(s);
    engine::PerfReport b = ev.evaluate(s);
    EXPECT_EQ(a.total_time, b.total_time);
    EXPECT_EQ(ev.mapped_graph(s), ev.mapped_graph(s));

    workload::TaskGraph g = workload::build_graph(s.model, s.workload);
    mapping::MappedGraph mg = mapping::apply_parallelism(g, s.mapping, s.model);
    EXPECT_EQ(engine::evaluate(mg, s.system, s.memory_access, s.placement).total_time, a.total_time);
}

TEST(Report, NumberFormat)
{
    EXPECT_EQ(report::format_number(1.0), "1.00000e+00");
    EXPECT_EQ(report::format_number(0.0), "0.00000e+00");
    EXPECT_EQ(report::format_number(2.45e15), "2.45000e+15");
    EXPECT_EQ(report::format_number(-1.234567e-9), "-1.23457e-09");
}

TEST(Report, CsvRowShape)
{
    Scenario s = build(source_from_json(small_training()));
    engine::PerfReport r = Evaluator().evaluate(s);
    const auto &metrics = report::metric_columns();
    auto header = report::csv_header(metrics);
    auto row = report::csv_row(s, r, metrics);
    ASSERT_EQ(header.size(), row.size());
    EXPECT_EQ(header[0], "scenario");
    std::string csv = report::to_csv(header, {row});
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
    EXPECT_EQ(report::metric_value(r, "total_time"), r.total_time);
    EXPECT_THROW(report::metric_value(r, "bogus"), Error);
}

TEST(Report, CsvQuoting)
{
    EXPECT_EQ(report::to_csv({"a", "b"}, {{"x,y", "say \"hi\""}}), "a,b\n\"x,y\",\"say \"\"hi\"\"\"\n");
}

TEST(Sweep, RowsEqualIndividualRuns)
{
    studies::SweepPlan plan = studies::load_sweep_plan(kPlans + "/infer_dram_bandwidth.json");
    auto points = studies::run_sweep(plan);
    ASSERT_EQ(points.size(), plan.values.size());
    for (std::size_t i = 0; i < points.size(); ++i)
    {
        Scenario s = build(plan.base, {{plan.axis, points[i].value}});
        engine::PerfReport r = Evaluator().evaluate(s);
        EXPECT_EQ(r.total_time, points[i].report.total_time) << i;
        if (i > 0)
            EXPECT_LT(points[i - 1].value.get<double>(), points[i].value.get<double>());
    }
    std::string csv = studies::sweep_csv(plan, points);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), static_cast<long>(points.size() + 1));
}

TEST(Sweep, RejectsUnknownOutputs)
{
    json doc = {{"name", "x"}, {"base", small_training()}, {"axis", "workload.batch"}, {"values", {8, 16}},
                {"outputs", {"nonsense"}}};
    EXPECT_THROW(studies::sweep_plan_from_json(doc, "."), ValidationError);
    doc["outputs"] = json::array();
    doc["values"] = json::array();
    EXPECT_THROW(studies::sweep_plan_from_json(doc, "."), ValidationError);
}

TEST(Compare, IdenticalSidesGiveUnitSpeedup)
{
    json doc = {{"name", "same"}, {"a", small_training()}, {"b", small_training()}};
    auto rows = studies::run_compare(studies::compare_plan_from_json(doc, "."));
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].speedup, 1.0);
}

TEST(Compare, WorkloadMismatchIsRejected)
{
    json b = small_training();
    b["workload"]["batch"] = 32;
    json doc = {{"name", "diff"}, {"a", small_training()}, {"b", b}};
    EXPECT_THROW(studies::run_compare(studies::compare_plan_from_json(doc, ".")), ValidationError);
}

TEST(KvFit, RequiresInferenceWorkload)
{
    json doc = {{"name", "kv"},
                {"base", small_training()},
                {"level", "L2"},
                {"cases", {{{"model", "gpt3-18b"}, {"mapping", {{"tp", 8}, {"pp", 8}, {"dp", 1}}}}}}};
    EXPECT_THROW(studies::run_kv_fit(studies::kv_fit_plan_from_json(doc, ".")), ValidationError);
}
