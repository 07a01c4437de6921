// SPDX-FileCopyrightText: © 2026 The llmperf Authors
//
// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "llmperf/engine.hpp"

using namespace llmperf;

namespace
{

workload::WorkloadSpec training(std::uint64_t batch, std::uint64_t microbatches)
{
    workload::WorkloadSpec wl;
    wl.batch = batch;
    wl.seq_len = 2048;
    wl.microbatches = microbatches;
    return wl;
}

workload::WorkloadSpec inference(std::uint64_t gen_tokens)
{
    workload::WorkloadSpec wl;
    wl.phase = workload::Phase::inference;
    wl.batch = 8;
    wl.seq_len = 200;
    wl.gen_tokens = gen_tokens;
    return wl;
}

void BM_BuildTrainingGraph(benchmark::State &state)
{
    const auto model = workload::model_preset("gpt3-76b");
    const auto wl = training(64, 8);
    for (auto _ : state)
        benchmark::DoNotOptimize(workload::build_graph(model, wl));
}
BENCHMARK(BM_BuildTrainingGraph)->Unit(benchmark::kMillisecond);

void BM_BuildInferenceGraph(benchmark::State &state)
{
    const auto model = workload::model_preset("llama-405b");
    const auto wl = inference(static_cast<std::uint64_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(workload::build_graph(model, wl));
}
BENCHMARK(BM_BuildInferenceGraph)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_EvaluateTraining(benchmark::State &state)
{
    const auto model = workload::model_preset("gpt3-76b");
    const auto mg = mapping::apply_parallelism(workload::build_graph(model, training(64, 64)), {8, 8, 1, 64}, model);
    const auto sys = hw::build_scd_blade_preset();
    for (auto _ : state)
        benchmark::DoNotOptimize(engine::evaluate(mg, sys, engine::MemoryAccessModel{}));
}
BENCHMARK(BM_EvaluateTraining)->Unit(benchmark::kMillisecond);

void BM_EvaluateInference(benchmark::State &state)
{
    const auto model = workload::model_preset("llama-405b");
    const auto mg = mapping::apply_parallelism(workload::build_graph(model, inference(200)), {64, 1, 1, 1}, model);
    const auto sys = hw::build_scd_blade_preset();
    for (auto _ : state)
        benchmark::DoNotOptimize(engine::evaluate(mg, sys, engine::MemoryAccessModel{}));
}
BENCHMARK(BM_EvaluateInference)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
