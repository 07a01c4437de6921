// SPDX-FileCopyrightText: © 2026 The llmperf Authors
//
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace llmperf;
using namespace llmperf::oracles;

namespace
{

constexpr int kConfigs = 200;

std::string join(const std::vector<std::string> &v)
{
    std::string out;
    for (std::size_t i = 0; i < v.size() && i < 10; ++i)
        out += v[i] + "\n";
    return out;
}

}  // namespace

TEST(Properties, RandomConfigsAreValid)
{
    std::mt19937_64 rng(10);
    for (int i = 0; i < kConfigs; ++i)
    {
        Config c = random_config(rng);
        EXPECT_TRUE(mapping::validate_mapping(c.mapping, c.model, c.workload.batch, c.workload.phase, c.system).empty());
        EXPECT_GT(run(c).total_time, 0);
    }
}

TEST(Properties, MonotoneInRatesAndLatencies)
{
    auto failures = check_monotonicity(kConfigs);
    EXPECT_TRUE(failures.empty()) << join(failures);
}

TEST(Properties, BreakdownSumsToTotal)
{
    auto failures = check_additivity(kConfigs);
    EXPECT_TRUE(failures.empty()) << join(failures);
}

TEST(Properties, Deterministic)
{
    auto failures = check_determinism(50);
    EXPECT_TRUE(failures.empty()) << join(failures);
}

TEST(Properties, ScaleInvariantWithoutLatency)
{
    auto failures = check_scale_invariance(100);
    EXPECT_TRUE(failures.empty()) << join(failures);
}

TEST(Properties, FlopsConservedAcrossMappings)
{
    auto failures = check_flops_conservation(kConfigs);
    EXPECT_TRUE(failures.empty()) << join(failures);
}

TEST(Properties, RooflineDominance)
{
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::uint64_t> dim(1, 4096);
    const engine::DeviceRates d = spu_rates();
    const engine::MemoryAccessModel mam;
    for (int i = 0; i < 500; ++i)
    {
        auto k = workload::make_gemm("g", {dim(rng), dim(rng), dim(rng), 1 + dim(rng) % 8}, Precision::bf16,
                                     TensorClass::activation, TensorClass::weight, TensorClass::activation);
        Residency r = {static_cast<std::uint8_t>(rng() % 3), static_cast<std::uint8_t>(rng() % 3),
                       static_cast<std::uint8_t>(rng() % 3)};
        auto t = engine::time_kernel(k, d, r, mam, Precision::bf16);
        double best = t.flops / d.compute_rate;
        for (std::size_t l = 0; l < d.levels.size(); ++l)
        {
            const double rd = t.bytes_read[l], wr = t.bytes_written[l];
            const double bw = rd / (mam.bandwidth_efficiency * d.levels[l].read_bandwidth) +
                              wr / (mam.bandwidth_efficiency * d.levels[l].write_bandwidth);
            const double lat = std::ceil((rd + wr) / 4096.0) / 64.0 * d.levels[l].latency;
            best = std::max({best, bw, lat});
        }
        EXPECT_EQ(t.time, best);
    }
}
