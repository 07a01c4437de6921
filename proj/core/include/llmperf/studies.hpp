// SPDX-FileCopyrightText: © 2026 The llmperf Authors
//
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "llmperf/report_io.hpp"
#include "llmperf/scenario.hpp"

namespace llmperf::studies
{

struct SweepPlan
{
    std::string name;
    scenario::Source base;
    std::string axis;
    std::vector<json> values;
    std::vector<std::string> outputs;  // empty: every metric
    std::string output_file;           // defaults to <name>.csv
};

SweepPlan load_sweep_plan(const std::string &path);
SweepPlan sweep_plan_from_json(const json &doc, const std::filesystem::path &base_dir);

struct SweepPoint
{
    json value;
    scenario::Scenario scenario;
    engine::PerfReport report;
};

// One point per axis value, ordered by value (numeric axes ascending).
// `extra` overrides apply to every point before the axis value.
std::vector<SweepPoint> run_sweep(const SweepPlan &plan, const std::vector<scenario::Override> &extra = {});
std::vector<std::string> sweep_metrics(const SweepPlan &plan);
std::string sweep_csv(const SweepPlan &plan, const std::vector<SweepPoint> &points);

struct ComparePlan
{
    std::string name;
    scenario::Source a;
    scenario::Source b;
    std::vector<std::string> models;  // empty: the scenarios' own models
    std::optional<std::string> axis;
    std::vector<json> values;
    std::string output_file;
};

ComparePlan load_compare_plan(const std::string &path);
ComparePlan compare_plan_from_json(const json &doc, const std::filesystem::path &base_dir);

struct CompareRow
{
    std::string model;
    std::optional<json> value;
    scenario::Scenario a;
    scenario::Scenario b;
    engine::PerfReport report_a;
    engine::PerfReport report_b;
    double speedup = 1.0;  // t_B / t_A
};

// Throws ValidationError when the two sides resolve to different workloads.
std::vector<CompareRow> run_compare(const ComparePlan &plan, const std::vector<scenario::Override> &extra = {});
std::string compare_csv(const std::vector<CompareRow> &rows);

struct KvFitCase
{
    std::string model;
    json mapping;
};

struct KvFitPlan
{
    std::string name;
    scenario::Source base;
    std::string level = "L2";
    std::vector<KvFitCase> cases;
    std::string output_file;
};

KvFitPlan load_kv_fit_plan(const std::string &path);
KvFitPlan kv_fit_plan_from_json(const json &doc, const std::filesystem::path &base_dir);

struct KvFitRow
{
    std::string model;
    mapping::MappingSpec mapping;
    double kv_cache_bytes = 0;     // whole system
    double kv_shard_bytes = 0;     // largest per-device shard
    double level_share_bytes = 0;  // per-device share of the level
    double level_capacity = 0;     // whole level
    bool fits = false;
    double attention_time_main = 0;
    double attention_time_level = 0;
    double attention_speedup = 1.0;
    double total_time_main = 0;
    double total_time_level = 0;
};

// Attention gemm time with KV in main memory versus pinned to the level.
// Cases that do not fit report a speedup of 1 and skip the pinned run.
std::vector<KvFitRow> run_kv_fit(const KvFitPlan &plan, const std::vector<scenario::Override> &extra = {});
std::string kv_fit_csv(const std::vector<KvFitRow> &rows);

// Total time of attention score/context gemms, all executions.
double attention_gemm_time(const engine::PerfReport &r);

}  // namespace llmperf::studies
