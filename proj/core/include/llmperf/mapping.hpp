// SPDX-FileCopyrightText: © 2026 The llmperf Authors
//
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "llmperf/hwspec.hpp"
#include "llmperf/workload.hpp"

namespace llmperf::mapping
{

struct MappingSpec
{
    int tp = 1;
    int pp = 1;
    int dp = 1;
    int microbatches = 1;

    int devices() const { return tp * pp * dp; }
    bool operator==(const MappingSpec &) const = default;
};

Violations validate_mapping(const MappingSpec &m, const workload::ModelSpec &model,
                            std::uint64_t batch, workload::Phase phase);
// Adds the device-count rule against a concrete system.
Violations validate_mapping(const MappingSpec &m, const workload::ModelSpec &model,
                            std::uint64_t batch, workload::Phase phase, const hw::SystemSpec &sys);

struct Stage
{
    int index = 0;
    int first_layer = 0;
    int end_layer = 0;  // exclusive
    // Kernels one device of this stage runs per microbatch (training), or for
    // the whole request (inference).
    workload::TaskGraph per_microbatch;
    // Kernels run once per step after the pipeline drains (training only).
    workload::TaskGraph per_step;

    int layers() const { return end_layer - first_layer; }
};

struct Footprint
{
    double weights = 0;
    double activations = 0;
    double optimizer_state = 0;
    double kv_cache = 0;

    double total() const { return weights + activations + optimizer_state + kv_cache; }
};

struct MappedGraph
{
    MappingSpec mapping;
    workload::ModelSpec model;
    workload::GraphMetadata source;  // metadata of the unsharded graph
    workload::WideCount unsharded_useful_flops = 0;
    std::uint64_t optimizer_state_bytes_per_param = 14;
    int microbatches = 1;  // repetitions of per_microbatch (1 for inference)
    std::vector<Stage> stages;

    workload::Phase phase() const { return source.phase; }
    // Useful flops one device of each stage executes, summed over stages and
    // scaled by tp * dp: equals unsharded_useful_flops for any valid mapping.
    workload::WideCount reassembled_useful_flops() const;
    std::size_t count_kernels(workload::KernelRole role) const;
};

// Contiguous near-even layer split: the first (layers % pp) stages take one
// extra layer.
std::vector<std::pair<int, int>> stage_layer_ranges(int num_layers, int pp);

// Throws ValidationError for divisibility violations.
MappedGraph apply_parallelism(const workload::TaskGraph &g, const MappingSpec &m,
                              const workload::ModelSpec &model);

// Worst-stage device footprint; `mean` divides the whole-system total evenly.
struct FootprintReport
{
    Footprint per_device;
    Footprint mean_per_device;
    int devices = 1;
};

FootprintReport memory_footprint(const MappedGraph &mg);

struct FitReport
{
    bool feasible = true;
    double capacity_per_device = 0;
    double footprint_per_device = 0;
    double headroom_per_device = 0;
    double capacity_total = 0;
    double footprint_total = 0;
};

FitReport check_fit(const MappedGraph &mg, const hw::SystemSpec &sys);
FitReport check_fit(const FootprintReport &fp, const hw::SystemSpec &sys);

json to_json(const MappingSpec &m);
MappingSpec mapping_from_json(const json &doc, const std::string &path = "mapping");
json to_json(const MappedGraph &mg);
json to_json(const FootprintReport &fp);
json to_json(const FitReport &fit);

}  // namespace llmperf::mapping
