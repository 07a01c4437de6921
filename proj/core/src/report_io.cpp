// SPDX-FileCopyrightText: © 2026 The llmperf Authors
//
// SPDX-License-Identifier: Apache-2.0
#include "llmperf/report_io.hpp"

#include <algorithm>
#include <cstdio>

namespace llmperf::report
{

std::string format_number(double value)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.5e", value);
    return buf;
}

const std::vector<std::string> &parameter_columns()
{
    static const std::vector<std::string> columns = {
        "scenario", "system",     "devices",   "per_device_bandwidth", "dram_latency", "model",
        "phase",    "batch",      "seq_len",   "gen_tokens",           "precision",    "tp",
        "pp",       "dp",         "microbatches", "overrides"};
    return columns;
}

const std::vector<std::string> &metric_columns()
{
    static const std::vector<std::string> columns = {
        "total_time",          "compute_time",       "communication_time",       "other_time",
        "bubble_time",         "weight_update_time", "achieved_flops_per_device", "useful_flops",
        "fwd_gemm_memory_fraction", "frac_compute",  "frac_memory",              "frac_latency",
        "frac_network",        "kv_cache_bytes",     "footprint_per_device",     "capacity_per_device",
        "feasible"};
    return columns;
}

bool is_metric(const std::string &name)
{
    const auto &m = metric_columns();
    return std::find(m.begin(), m.end(), name) != m.end();
}

namespace
{

double prefixed_fraction(const std::map<std::string, double> &profile, const std::string &prefix)
{
    double sum = 0;
    for (const auto &[label, value] : profile)
        if (label.rfind(prefix, 0) == 0)
            sum += value;
    return sum;
}

}  // namespace

double metric_value(const engine::PerfReport &r, const std::string &metric)
{
    if (metric == "total_time")
        return r.total_time;
    if (metric == "compute_time")
        return r.compute_time;
    if (metric == "communication_time")
        return r.communication_time;
    if (metric == "other_time")
        return r.other_time;
    if (metric == "bubble_time")
        return r.bubble_time;
    if (metric == "weight_update_time")
        return r.weight_update_time;
    if (metric == "achieved_flops_per_device")
        return r.achieved_flops_per_device;
    if (metric == "useful_flops")
        return r.useful_flops;
    if (metric == "fwd_gemm_memory_fraction")
        return engine::memory_bound_fraction(engine::boundedness_profile(r, engine::is_forward_gemm));
    if (metric == "frac_compute")
        return prefixed_fraction(r.bound_fractions, "compute");
    if (metric == "frac_memory")
        return prefixed_fraction(r.bound_fractions, "memory@");
    if (metric == "frac_latency")
        return prefixed_fraction(r.bound_fractions, "latency@");
    if (metric == "frac_network")
        return prefixed_fraction(r.bound_fractions, "network");
    if (metric == "kv_cache_bytes")
        return r.footprint.mean_per_device.kv_cache * r.footprint.devices;
    if (metric == "footprint_per_device")
        return r.fit.footprint_per_device;
    if (metric == "capacity_per_device")
        return r.fit.capacity_per_device;
    if (metric == "feasible")
        return r.fit.feasible ? 1.0 : 0.0;
    throw ValidationError("outputs", "unknown metric '" + metric + "'");
}

Row parameter_values(const scenario::Scenario &s)
{
    std::string overrides;
    for (const auto &[key, value] : s.overrides)
        overrides += (overrides.empty() ? "" : ";") + key + "=" +
                     (value.is_number() ? format_number(value.get<double>()) : value.dump());
    return {s.name,
            s.system.name,
            std::to_string(s.system.device_count),
            format_number(s.system.main_memory.per_device_bandwidth),
            format_number(s.system.main_memory.access_latency),
            s.model.name,
            std::string(workload::to_string(s.workload.phase)),
            std::to_string(s.workload.batch),
            std::to_string(s.workload.seq_len),
            std::to_string(s.workload.gen_tokens),
            std::string(to_string(s.workload.precision)),
            std::to_string(s.mapping.tp),
            std::to_string(s.mapping.pp),
            std::to_string(s.mapping.dp),
            std::to_string(s.mapping.microbatches),
            overrides};
}

Row metric_values(const engine::PerfReport &r, const std::vector<std::string> &metrics)
{
    Row row;
    for (const auto &m : metrics)
        row.push_back(m == "feasible" ? (r.fit.feasible ? "1" : "0") : format_number(metric_value(r, m)));
    return row;
}

std::vector<std::string> csv_header(const std::vector<std::string> &metrics)
{
    std::vector<std::string> header = parameter_columns();
    header.insert(header.end(), metrics.begin(), metrics.end());
    return header;
}

Row csv_row(const scenario::Scenario &s, const engine::PerfReport &r, const std::vector<std::string> &metrics)
{
    Row row = parameter_values(s);
    Row values = metric_values(r, metrics);
    row.insert(row.end(), values.begin(), values.end());
    return row;
}

namespace
{

std::string quote(const std::string &field)
{
    if (field.find_first_of(",\"\n") == std::string::npos)
        return field;
    std::string out = "\"";
    for (char c : field)
    {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

void append_line(std::string &out, const std::vector<std::string> &fields)
{
    for (std::size_t i = 0; i < fields.size(); ++i)
    {
        if (i)
            out += ',';
        out += quote(fields[i]);
    }
    out += '\n';
}

}  // namespace

std::string to_csv(const std::vector<std::string> &header, const std::vector<Row> &rows)
{
    std::string out;
    append_line(out, header);
    for (const auto &row : rows)
        append_line(out, row);
    return out;
}

json report_document(const scenario::Scenario &s, const engine::PerfReport &r, bool include_kernels)
{
    const auto &metrics = metric_columns();
    json row = json::object();
    auto header = csv_header(metrics);
    auto values = csv_row(s, r, metrics);
    for (std::size_t i = 0; i < header.size(); ++i)
        row[header[i]] = values[i];
    return {{"scenario", scenario::to_json(s)}, {"report", engine::to_json(r, include_kernels)}, {"row", row}};
}

}  // namespace llmperf::report
