// SPDX-FileCopyrightText: © 2026 The llmperf Authors
//
// SPDX-License-Identifier: Apache-2.0
#include "llmperf/studies.hpp"

#include <algorithm>

namespace llmperf::studies
{

using scenario::Override;
using scenario::Source;

namespace
{

std::filesystem::path directory_of(const std::string &path)
{
    std::filesystem::path p(path);
    return p.has_parent_path() ? p.parent_path() : ".";
}

Source scenario_source(const json &ref, const std::filesystem::path &base_dir, const std::string &field)
{
    if (ref.is_object())
        return scenario::source_from_json(ref, base_dir);
    if (!ref.is_string())
        throw ParseError(field + ": expected a scenario path or object");
    std::filesystem::path p(ref.get<std::string>());
    if (p.is_relative())
        p = base_dir / p;
    return scenario::load_source(p.string());
}

std::vector<json> axis_values(FieldReader &r)
{
    const json &values = r.at("values");
    if (!values.is_array() || values.empty())
        throw ValidationError(r.child_path("values"), "values must be a non-empty array");
    return {values.begin(), values.end()};
}

void order_values(std::vector<json> &values)
{
    if (std::all_of(values.begin(), values.end(), [](const json &v) { return v.is_number(); }))
        std::stable_sort(values.begin(), values.end(),
                         [](const json &a, const json &b) { return a.get<double>() < b.get<double>(); });
}

std::vector<Override> with(const std::vector<Override> &extra, const std::optional<std::string> &axis,
                           const std::optional<json> &value)
{
    std::vector<Override> all = extra;
    if (axis && value)
        all.emplace_back(*axis, *value);
    return all;
}

}  // namespace

SweepPlan sweep_plan_from_json(const json &doc, const std::filesystem::path &base_dir)
{
    FieldReader r(doc, "sweep");
    SweepPlan plan;
    plan.name = r.required<std::string>("name");
    plan.base = scenario_source(r.at("base"), base_dir, "sweep.base");
    plan.axis = r.required<std::string>("axis");
    plan.values = axis_values(r);
    plan.outputs = r.value_or<std::vector<std::string>>("outputs", {});
    plan.output_file = r.value_or<std::string>("output", plan.name + ".csv");
    r.optional<std::string>("description");
    r.finish();
    for (const auto &m : plan.outputs)
        if (!report::is_metric(m))
            throw ValidationError("sweep.outputs", "unknown metric '" + m + "'");
    return plan;
}

SweepPlan load_sweep_plan(const std::string &path)
{
    return sweep_plan_from_json(load_json_file(path), directory_of(path));
}

std::vector<SweepPoint> run_sweep(const SweepPlan &plan, const std::vector<Override> &extra)
{
    std::vector<json> values = plan.values;
    order_values(values);
    scenario::Evaluator evaluator;
    std::vector<SweepPoint> points;
    for (const auto &v : values)
    {
        std::vector<Override> overrides = extra;
        overrides.emplace_back(plan.axis, v);
        SweepPoint point{v, scenario::build(plan.base, overrides), {}};
        point.report = evaluator.evaluate(point.scenario);
        points.push_back(std::move(point));
    }
    return points;
}

std::vector<std::string> sweep_metrics(const SweepPlan &plan)
{
    return plan.outputs.empty() ? report::metric_columns() : plan.outputs;
}

std::string sweep_csv(const SweepPlan &plan, const std::vector<SweepPoint> &points)
{
    const auto metrics = sweep_metrics(plan);
    std::vector<report::Row> rows;
    for (const auto &p : points)
        rows.push_back(report::csv_row(p.scenario, p.report, metrics));
    return report::to_csv(report::csv_header(metrics), rows);
}

ComparePlan compare_plan_from_json(const json &doc, const std::filesystem::path &base_dir)
{
    FieldReader r(doc, "compare");
    ComparePlan plan;
    plan.name = r.required<std::string>("name");
    plan.a = scenario_source(r.at("a"), base_dir, "compare.a");
    plan.b = scenario_source(r.at("b"), base_dir, "compare.b");
    plan.models = r.value_or<std::vector<std::string>>("models", {});
    plan.axis = r.optional<std::string>("axis");
    if (plan.axis)
        plan.values = axis_values(r);
    else
        r.optional<json>("values");
    plan.output_file = r.value_or<std::string>("output", plan.name + ".csv");
    r.optional<std::string>("description");
    r.finish();
    return plan;
}

ComparePlan load_compare_plan(const std::string &path)
{
    return compare_plan_from_json(load_json_file(path), directory_of(path));
}

std::vector<CompareRow> run_compare(const ComparePlan &plan, const std::vector<Override> &extra)
{
    std::vector<std::optional<std::string>> models;
    if (plan.models.empty())
        models.emplace_back(std::nullopt);
    for (const auto &m : plan.models)
        models.emplace_back(m);
    std::vector<std::optional<json>> values;
    if (plan.values.empty())
        values.emplace_back(std::nullopt);
    std::vector<json> sorted = plan.values;
    order_values(sorted);
    for (const auto &v : sorted)
        values.emplace_back(v);

    scenario::Evaluator evaluator;
    std::vector<CompareRow> rows;
    for (const auto &model : models)
    {
        Source a = plan.a, b = plan.b;
        if (model)
        {
            scenario::set_reference(a, "model", *model);
            scenario::set_reference(b, "model", *model);
        }
        for (const auto &value : values)
        {
            auto overrides = with(extra, plan.axis, value);
            CompareRow row;
            row.a = scenario::build(a, overrides);
            row.b = scenario::build(b, overrides);
            if (workload::to_json(row.a.workload) != workload::to_json(row.b.workload) ||
                workload::to_json(row.a.model) != workload::to_json(row.b.model))
                throw ValidationError("workload", "compare requires the same model and workload on both sides");
            row.model = row.a.model.name;
            row.value = value;
            row.report_a = evaluator.evaluate(row.a);
            row.report_b = evaluator.evaluate(row.b);
            row.speedup = row.report_a.total_time > 0 ? row.report_b.total_time / row.report_a.total_time : 1.0;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::string compare_csv(const std::vector<CompareRow> &rows)
{
    std::vector<std::string> header = {
        "model",          "axis_value",      "system_a",        "system_b",       "time_a",
        "time_b",         "compute_a",       "communication_a", "other_a",        "compute_b",
        "communication_b", "other_b",        "flops_per_device_a", "flops_per_device_b", "kv_cache_bytes",
        "feasible_a",     "feasible_b",      "speedup"};
    using report::format_number;
    std::vector<report::Row> out;
    for (const auto &r : rows)
    {
        std::string value;
        if (r.value)
            value = r.value->is_number() ? format_number(r.value->get<double>()) : r.value->dump();
        out.push_back({r.model,
                       value,
                       r.a.system.name,
                       r.b.system.name,
                       format_number(r.report_a.total_time),
                       format_number(r.report_b.total_time),
                       format_number(r.report_a.compute_time),
                       format_number(r.report_a.communication_time),
                       format_number(r.report_a.other_time),
                       format_number(r.report_b.compute_time),
                       format_number(r.report_b.communication_time),
                       format_number(r.report_b.other_time),
                       format_number(r.report_a.achieved_flops_per_device),
                       format_number(r.report_b.achieved_flops_per_device),
                       format_number(report::metric_value(r.report_a, "kv_cache_bytes")),
                       r.report_a.fit.feasible ? "1" : "0",
                       r.report_b.fit.feasible ? "1" : "0",
                       format_number(r.speedup)});
    }
    return report::to_csv(header, out);
}

KvFitPlan kv_fit_plan_from_json(const json &doc, const std::filesystem::path &base_dir)
{
    FieldReader r(doc, "kv_fit");
    KvFitPlan plan;
    plan.name = r.required<std::string>("name");
    plan.base = scenario_source(r.at("base"), base_dir, "kv_fit.base");
    plan.level = r.value_or<std::string>("level", "L2");
    const json &cases = r.at("cases");
    if (!cases.is_array() || cases.empty())
        throw ValidationError("kv_fit.cases", "cases must be a non-empty array");
    for (std::size_t i = 0; i < cases.size(); ++i)
    {
        FieldReader c(cases[i], "kv_fit.cases[" + std::to_string(i) + "]");
        KvFitCase kc;
        kc.model = c.required<std::string>("model");
        kc.mapping = c.value_or<json>("mapping", json(nullptr));
        c.finish();
        plan.cases.push_back(std::move(kc));
    }
    plan.output_file = r.value_or<std::string>("output", plan.name + ".csv");
    r.optional<std::string>("description");
    r.finish();
    return plan;
}

KvFitPlan load_kv_fit_plan(const std::string &path)
{
    return kv_fit_plan_from_json(load_json_file(path), directory_of(path));
}

double attention_gemm_time(const engine::PerfReport &r)
{
    double sum = 0;
    for (const auto &t : r.kernels)
        if (t.gemm && (t.role == workload::KernelRole::attn_score || t.role == workload::KernelRole::attn_context))
            sum += t.time * static_cast<double>(t.count);
    return sum;
}

std::vector<KvFitRow> run_kv_fit(const KvFitPlan &plan, const std::vector<Override> &extra)
{
    scenario::Evaluator evaluator;
    std::vector<KvFitRow> rows;
    for (const auto &c : plan.cases)
    {
        Source src = plan.base;
        scenario::set_reference(src, "model", c.model);
        if (!c.mapping.is_null())
            scenario::set_reference(src, "mapping", c.mapping);
        scenario::Scenario s = scenario::build(src, extra);
        if (s.workload.phase != workload::Phase::inference)
            throw ValidationError("workload.phase", "kv-fit needs an inference workload");
        s.placement.kv_level.reset();

        const hw::MemoryLevel *level = s.system.device.find_level(plan.level);
        if (!level)
            throw ValidationError("kv_fit.level", "unknown memory level '" + plan.level + "'");

        KvFitRow row;
        row.model = s.model.name;
        row.mapping = s.mapping;
        engine::PerfReport main = evaluator.evaluate(s);
        row.kv_cache_bytes = report::metric_value(main, "kv_cache_bytes");
        row.kv_shard_bytes = main.footprint.per_device.kv_cache;
        row.level_share_bytes = hw::capacity_share(s.system, *level);
        row.level_capacity = level->capacity;
        row.fits = row.kv_shard_bytes <= row.level_share_bytes;
        row.attention_time_main = attention_gemm_time(main);
        row.total_time_main = main.total_time;
        row.attention_time_level = row.attention_time_main;
        row.total_time_level = row.total_time_main;
        if (row.fits)
        {
            s.placement.kv_level = plan.level;
            engine::PerfReport pinned = evaluator.evaluate(s);
            row.attention_time_level = attention_gemm_time(pinned);
            row.total_time_level = pinned.total_time;
            if (row.attention_time_level > 0)
                row.attention_speedup = row.attention_time_main / row.attention_time_level;
        }
        rows.push_back(row);
    }
    return rows;
}

std::string kv_fit_csv(const std::vector<KvFitRow> &rows)
{
    std::vector<std::string> header = {"model",          "tp",
                                       "pp",             "dp",
                                       "kv_cache_bytes", "kv_shard_bytes",
                                       "level_share_bytes", "level_capacity",
                                       "fits",           "attention_time_main",
                                       "attention_time_level", "attention_speedup",
                                       "total_time_main", "total_time_level"};
    using report::format_number;
    std::vector<report::Row> out;
    for (const auto &r : rows)
        out.push_back({r.model, std::to_string(r.mapping.tp), std::to_string(r.mapping.pp),
                       std::to_string(r.mapping.dp), format_number(r.kv_cache_bytes), format_number(r.kv_shard_bytes),
                       format_number(r.level_share_bytes), format_number(r.level_capacity), r.fits ? "1" : "0",
                       format_number(r.attention_time_main), format_number(r.attention_time_level),
                       format_number(r.attention_speedup), format_number(r.total_time_main),
                       format_number(r.total_time_level)});
    return report::to_csv(header, out);
}

}  // namespace llmperf::studies
