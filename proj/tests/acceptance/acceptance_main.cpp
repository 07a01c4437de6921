// SPDX-FileCopyrightText: © 2026 The llmperf Authors
//
// SPDX-License-Identifier: Apache-2.0

// Prints one PASS/FAIL line per acceptance criterion and exits nonzero when
// any criterion fails.

#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "llmperf/studies.hpp"
#include "oracles.hpp"

using namespace llmperf;

namespace
{

const std::string kPlans = LLMPERF_PLANS_DIR;

struct Outcome
{
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string &what)
    {
        if (!ok)
        {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + ("failed: " + what);
        }
    }
    void note(const std::string &text) { detail += (detail.empty() ? "" : "; ") + text; }
};

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

bool within(double v, double lo, double hi) { return v >= lo && v <= hi; }

double value_of(const studies::SweepPoint &p) { return p.value.get<double>(); }

Outcome preset_fidelity()
{
    Outcome o;
    const hw::SystemSpec s = hw::system_preset("scd-blade");
    o.require(s.device.peak_flops(Precision::bf16) == 2.45e15, "SPU peak 2.45e15");
    o.require(s.device.utilization_ceiling == 0.8, "utilization 0.8");
    o.require(s.main_memory.per_device_bandwidth == 0.47e12, "per-SPU DRAM 0.47e12");
    o.require(s.main_memory.total_read_bandwidth == 20e12, "pool read 20e12");
    o.require(s.main_memory.total_write_bandwidth == 10e12, "pool write 10e12");
    o.require(s.main_memory.access_latency == 30e-9, "DRAM latency 30e-9");
    o.require(s.main_memory.capacity == 2e12, "DRAM capacity 2e12");
    const hw::SystemSpec g = hw::system_preset("h100-node");
    o.require(g.device.peak_flops(Precision::bf16) == 0.9895e15, "H100 peak 0.9895e15");
    o.require(g.main_memory.per_device_bandwidth == 3.35e12, "H100 HBM 3.35e12");
    o.require(hw::main_memory_share(g) == 80e9, "H100 HBM 80e9");
    const auto *l2 = g.device.find_level("L2");
    o.require(l2 && l2->capacity == 50e6, "H100 L2 50e6");
    if (o.pass)
        o.note("all preset values exact");
    return o;
}

Outcome training_bandwidth_sweep()
{
    Outcome o;
    const auto plan = studies::load_sweep_plan(kPlans + "/train_dram_bandwidth.json");
    const auto points = studies::run_sweep(plan);
    std::map<double, double> achieved, fwd_memory;
    for (const auto &p : points)
    {
        achieved[value_of(p)] = p.report.achieved_flops_per_device;
        fwd_memory[value_of(p)] =
            engine::memory_bound_fraction(engine::boundedness_profile(p.report, engine::is_forward_gemm));
    }
    double prev = 0;
    bool monotone = true;
    for (const auto &[bw, a] : achieved)
    {
        monotone = monotone && a >= prev;
        prev = a;
    }
    o.require(monotone, "achieved throughput monotone non-decreasing");
    const double at16 = achieved.at(16e12), at64 = achieved.at(64e12);
    o.note("16 TB/s: " + num(at16) + " flops/s per device");
    o.require(within(at16, 1.6e15, 2.4e15), "16 TB/s value in [1.6, 2.4]e15");
    o.note("16->64 gain " + num((at64 - at16) / at16 * 100) + "%");
    o.require((at64 - at16) / at16 < 0.25, "16->64 gain < 25%");
    o.note("fwd gemm memory-bound share " + num(fwd_memory.at(0.5e12)) + " at 0.5 TB/s");
    o.require(fwd_memory.at(0.5e12) > 0.5, "forward gemms mostly memory-bound at 0.5 TB/s");
    for (const auto &[bw, f] : fwd_memory)
        if (bw >= 16e12)
            o.require(f <= 0.5, "forward gemms at most half memory-bound at " + num(bw));
    return o;
}

bool breakdown_exact(const engine::PerfReport &r)
{
    return r.compute_time + r.communication_time + r.other_time == r.total_time;
}

Outcome training_compare()
{
    Outcome o;
    const auto rows = studies::run_compare(studies::load_compare_plan(kPlans + "/train_speedup.json"));
    o.require(rows.size() == 3, "three models");
    for (const auto &row : rows)
    {
        o.note(row.model + " " + num(row.speedup) + "x at " + num(row.report_a.achieved_flops_per_device));
        o.require(within(row.speedup, 2.5, 6.0), row.model + " speedup in [2.5, 6]");
        o.require(within(row.report_a.achieved_flops_per_device, 1.1e15, 1.9e15),
                  row.model + " SPU throughput in [1.1, 1.9]e15");
        o.require(breakdown_exact(row.report_a) && breakdown_exact(row.report_b), row.model + " breakdown sums");
    }
    return o;
}

Outcome inference_bandwidth_sweep()
{
    Outcome o;
    const auto points = studies::run_sweep(studies::load_sweep_plan(kPlans + "/infer_dram_bandwidth.json"));
    std::map<double, double> latency;
    for (const auto &p : points)
        latency[value_of(p)] = p.report.total_time;
    const double lo = latency.at(0.5e12), hi = latency.at(32e12);
    o.note("0.5 TB/s " + num(lo) + " s, 32 TB/s " + num(hi) + " s, ratio " + num(lo / hi));
    o.require(within(lo, 6.0, 11.5), "latency at 0.5 TB/s in [6, 11.5] s");
    o.require(within(hi, 0.3, 0.8), "latency at 32 TB/s in [0.3, 0.8] s");
    o.require(lo / hi >= 10, "ratio >= 10");
    double prev_gain = INFINITY;
    for (const auto &[bw, t] : latency)
    {
        auto next = latency.find(bw * 2);
        if (bw < 8e12 || next == latency.end())
            continue;
        const double gain = t / next->second;
        o.require(gain < prev_gain, "per-doubling improvement shrinking from " + num(bw));
        prev_gain = gain;
    }
    return o;
}

double pearson(const std::vector<double> &x, const std::vector<double> &y)
{
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        mx += x[i] / n;
        my += y[i] / n;
    }
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

Outcome inference_latency_sweep()
{
    Outcome o;
    const auto points = studies::run_sweep(studies::load_sweep_plan(kPlans + "/infer_dram_latency.json"));
    std::vector<double> lat, thr;
    for (const auto &p : points)
    {
        lat.push_back(value_of(p));
        thr.push_back(p.report.achieved_flops_per_device);
    }
    o.require(lat.size() >= 2 && lat.front() == 10e-9 && lat.back() == 200e-9, "sweep spans 10 to 200 ns");
    for (std::size_t i = 1; i < thr.size(); ++i)
        o.require(thr[i] < thr[i - 1], "throughput strictly decreasing at " + num(lat[i]));
    const double r = pearson(lat, thr);
    o.note("Pearson " + num(r));
    o.require(r < -0.9, "Pearson < -0.9");
    return o;
}

Outcome inference_compare()
{
    Outcome o;
    const auto rows = studies::run_compare(studies::load_compare_plan(kPlans + "/infer_speedup.json"));
    std::map<std::string, double> speedup;
    for (const auto &row : rows)
    {
        speedup[row.model] = row.speedup;
        o.note(row.model + " " + num(row.speedup) + "x");
        o.require(within(row.speedup, 6, 14), row.model + " speedup in [6, 14]");
    }
    o.require(speedup.size() == 3 && speedup.count("moe-132b") && speedup.count("llama-70b") &&
                  speedup.count("llama-405b"),
              "three models");
    if (speedup.count("moe-132b") && speedup.count("llama-70b"))
        o.require(speedup.at("llama-70b") >= speedup.at("moe-132b"), "llama-70b speedup >= moe-132b speedup");
    return o;
}

Outcome kv_cache_oracle()
{
    Outcome o;
    struct Case
    {
        const char *model;
        double layers, width, quoted, rounded;
    };
    // K and V per token per layer, full width, two bytes each
    const Case cases[] = {{"llama2-7b", 32, 4096, 2.15e9, 2e9},
                          {"llama2-13b", 40, 5120, 3.36e9, 3e9},
                          {"llama2-70b", 80, 8192, 1.07e10, 10e9}};
    for (const auto &c : cases)
    {
        const double hand = 2 * c.layers * 4096 * c.width * 2;
        const double model =
            static_cast<double>(workload::kv_cache_bytes(workload::model_preset(c.model), 1, 4096, Precision::bf16));
        o.note(std::string(c.model) + " " + num(model) + " B");
        o.require(std::fabs(model - hand) / hand <= 0.03, std::string(c.model) + " within 3% of hand arithmetic");
        o.require(std::fabs(model - c.quoted) / c.quoted <= 0.03, std::string(c.model) + " within 3% of " + num(c.quoted));
        o.require(std::fabs(model - c.rounded) / c.rounded <= 0.15, std::string(c.model) + " within 15% of rounded");
    }
    return o;
}

Outcome kv_level_fit()
{
    Outcome o;
    const auto rows = studies::run_kv_fit(studies::load_kv_fit_plan(kPlans + "/kv_fit.json"));
    std::map<std::string, const studies::KvFitRow *> by_model;
    for (const auto &r : rows)
        by_model[r.model] = &r;
    const std::pair<const char *, bool> expected[] = {
        {"llama2-7b", true}, {"llama2-13b", true}, {"llama2-70b", false}};
    for (const auto &[model, fits] : expected)
    {
        auto it = by_model.find(model);
        if (it == by_model.end())
        {
            o.require(false, std::string(model) + " present");
            continue;
        }
        const auto &r = *it->second;
        o.require(r.fits == fits, std::string(model) + (fits ? " fits" : " does not fit"));
        o.require((r.kv_cache_bytes <= 4.19e9) == fits, std::string(model) + " total KV against 4.19e9");
        if (fits)
        {
            o.note(std::string(model) + " attention speedup " + num(r.attention_speedup) + "x");
            o.require(within(r.attention_speedup, 2, 8), std::string(model) + " attention speedup in [2, 8]");
        }
    }
    return o;
}

Outcome oracle_equivalence()
{
    Outcome o;
    const auto ring = oracles::check_ring_oracle();
    o.require(ring.empty(), "ring closed form vs simulation (" + std::to_string(ring.size()) + " mismatches)");
    int kernel_failures = 0;
    const auto cases = oracles::documented_kernel_cases();
    for (const auto &c : cases)
    {
        const auto t = engine::time_kernel(c.kernel, c.device, c.residency, c.mam, Precision::bf16);
        if (oracles::relative_error(t.time, c.expected) > 1e-12)
        {
            ++kernel_failures;
            o.require(false, "time_kernel case '" + c.name + "'");
        }
    }
    o.require(cases.size() == 10, "ten documented cases");
    o.note("ring n=2..16 x 100 payloads, " + std::to_string(cases.size() - kernel_failures) + "/" +
           std::to_string(cases.size()) + " kernel cases");
    return o;
}

Outcome property_suites()
{
    Outcome o;
    auto check = [&](const char *name, const std::vector<std::string> &failures) {
        o.require(failures.empty(), std::string(name) + " (" + std::to_string(failures.size()) + " configs)");
    };
    check("flops conservation", oracles::check_flops_conservation(200));
    check("monotonicity", oracles::check_monotonicity(200));
    check("additivity", oracles::check_additivity(200));
    check("determinism", oracles::check_determinism(50));
    check("scale invariance", oracles::check_scale_invariance(100));
    if (o.pass)
        o.note("200 random configurations");
    return o;
}

}  // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"preset fidelity", preset_fidelity},
        {"training throughput vs DRAM bandwidth", training_bandwidth_sweep},
        {"training speedup over GPUs", training_compare},
        {"inference latency vs DRAM bandwidth", inference_bandwidth_sweep},
        {"inference throughput vs DRAM latency", inference_latency_sweep},
        {"inference speedup over GPUs", inference_compare},
        {"KV-cache size oracle", kv_cache_oracle},
        {"KV-cache residency in L2", kv_level_fit},
        {"oracle equivalence", oracle_equivalence},
        {"property suites", property_suites},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i)
    {
        Outcome o;
        try
        {
            o = criteria[i].second();
        }
        catch (const std::exception &e)
        {
            o.pass = false;
            o.detail = std::string("error: ") + e.what();
        }
        failed += o.pass ? 0 : 1;
        std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
