// SPDX-FileCopyrightText: © 2026 The llmperf Authors
//
// SPDX-License-Identifier: Apache-2.0
#include "enum_names.hpp"
#include "llmperf/workload.hpp"

namespace llmperf::workload
{

namespace
{

using detail::name_of;
using detail::parse_name;

json kind_to_json(const KernelKind &kind)
{
    if (const auto *g = std::get_if<Gemm>(&kind))
        return {{"type", "gemm"}, {"m", g->m}, {"n", g->n}, {"k", g->k}, {"batch_count", g->batch_count}};
    if (const auto *e = std::get_if<Elementwise>(&kind))
        return {{"type", "elementwise"},
                {"elements", e->elements},
                {"flops_per_element", e->flops_per_element},
                {"bytes_read", e->bytes_read},
                {"bytes_written", e->bytes_written}};
    if (const auto *c = std::get_if<Collective>(&kind))
        return {{"type", "collective"},
                {"op", std::string(name_of(detail::kCollectiveNames, c->op))},
                {"payload", c->payload},
                {"group_size", c->group_size}};
    return {{"type", "p2p"}, {"payload", std::get<P2P>(kind).payload}};
}

KernelKind kind_from_json(const json &doc, const std::string &path)
{
    FieldReader r(doc, path);
    auto type = r.required<std::string>("type");
    KernelKind kind;
    if (type == "gemm")
        kind = Gemm{r.required<std::uint64_t>("m"), r.required<std::uint64_t>("n"), r.required<std::uint64_t>("k"),
                    r.value_or<std::uint64_t>("batch_count", 1)};
    else if (type == "elementwise")
        kind = Elementwise{r.required<std::uint64_t>("elements"), r.required<std::uint64_t>("flops_per_element"),
                           r.required<std::uint64_t>("bytes_read"), r.required<std::uint64_t>("bytes_written")};
    else if (type == "collective")
        kind = Collective{parse_name(detail::kCollectiveNames, r.required<std::string>("op"), r.child_path("op")),
                          r.required<std::uint64_t>("payload"), r.required<int>("group_size")};
    else if (type == "p2p")
        kind = P2P{r.required<std::uint64_t>("payload")};
    else
        throw ParseError(r.child_path("type") + ": unknown kernel type '" + type + "'");
    r.finish();
    return kind;
}

}  // namespace

json to_json(const TaskGraph &g)
{
    json kernels = json::array();
    for (const auto &k : g.kernels)
    {
        json operands = json::array();
        for (const auto &op : k.operands)
        {
            json o = {{"bytes", op.bytes},
                      {"access", std::string(name_of(detail::kAccessNames, op.access))},
                      {"tensor", std::string(name_of(detail::kTensorNames, op.tensor))}};
            if (op.hint)
                o["residency_hint"] = std::string(name_of(detail::kHintNames, *op.hint));
            operands.push_back(std::move(o));
        }
        kernels.push_back({{"id", k.id},
                           {"kind", kind_to_json(k.kind)},
                           {"operands", std::move(operands)},
                           {"deps", k.deps},
                           {"useful_flops", k.useful_flops},
                           {"role", std::string(to_string(k.role))},
                           {"pass", std::string(to_string(k.pass))},
                           {"grad", std::string(name_of(detail::kGradNames, k.grad))},
                           {"layer", k.layer},
                           {"step", k.step},
                           {"shard",
                            {{"data_dim", std::string(name_of(detail::kDimNames, k.shard.data_dim))},
                             {"tp_dim", std::string(name_of(detail::kDimNames, k.shard.tp_dim))},
                             {"elementwise_data", k.shard.elementwise_data},
                             {"elementwise_tp", k.shard.elementwise_tp}}}});
    }
    const GraphMetadata &m = g.metadata;
    return {{"metadata",
             {{"phase", std::string(to_string(m.phase))},
              {"model", m.model},
              {"precision", std::string(llmperf::to_string(m.precision))},
              {"batch", m.batch},
              {"seq_len", m.seq_len},
              {"gen_tokens", m.gen_tokens},
              {"totals",
               {{"flops", m.totals.flops},
                {"useful_flops", m.totals.useful_flops},
                {"bytes_read", m.totals.bytes_read},
                {"bytes_written", m.totals.bytes_written}}}}},
            {"kernels", std::move(kernels)}};
}

TaskGraph graph_from_json(const json &doc)
{
    FieldReader r(doc, "graph");
    TaskGraph g;
    {
        FieldReader m(r.at("metadata"), "graph.metadata");
        g.metadata.phase = parse_name(detail::kPhaseNames, m.required<std::string>("phase"), m.child_path("phase"));
        g.metadata.model = m.value_or<std::string>("model", "");
        g.metadata.precision = parse_precision(m.value_or<std::string>("precision", "bf16"));
        g.metadata.batch = m.value_or<std::uint64_t>("batch", 0);
        g.metadata.seq_len = m.value_or<std::uint64_t>("seq_len", 0);
        g.metadata.gen_tokens = m.value_or<std::uint64_t>("gen_tokens", 0);
        if (m.has("totals"))
        {
            FieldReader t(m.at("totals"), m.child_path("totals"));
            g.metadata.totals = {t.required<double>("flops"), t.required<double>("useful_flops"),
                                 t.required<double>("bytes_read"), t.required<double>("bytes_written")};
            t.finish();
        }
        m.finish();
    }

    const json &kernels = r.at("kernels");
    if (!kernels.is_array())
        throw ParseError("graph.kernels: expected an array");
    for (std::size_t i = 0; i < kernels.size(); ++i)
    {
        const std::string path = "graph.kernels[" + std::to_string(i) + "]";
        FieldReader kr(kernels[i], path);
        Kernel k;
        k.id = kr.required<std::string>("id");
        k.kind = kind_from_json(kr.at("kind"), kr.child_path("kind"));
        const json &operands = kr.value_or<json>("operands", json::array());
        for (std::size_t j = 0; j < operands.size(); ++j)
        {
            FieldReader o(operands[j], kr.child_path("operands") + "[" + std::to_string(j) + "]");
            Operand op;
            op.bytes = o.required<std::uint64_t>("bytes");
            op.access = parse_name(detail::kAccessNames, o.required<std::string>("access"), o.child_path("access"));
            op.tensor =
                parse_name(detail::kTensorNames, o.value_or<std::string>("tensor", "activation"), o.child_path("tensor"));
            if (auto hint = o.optional<std::string>("residency_hint"))
                op.hint = parse_name(detail::kHintNames, *hint, o.child_path("residency_hint"));
            o.finish();
            k.operands.push_back(op);
        }
        k.deps = kr.value_or<std::vector<std::uint32_t>>("deps", {});
        k.useful_flops = kr.value_or<std::uint64_t>("useful_flops", k.is_gemm() ? kernel_flops(k) : 0);
        k.role = parse_name(detail::kRoleNames, kr.value_or<std::string>("role", "custom"), kr.child_path("role"));
        k.pass = parse_name(detail::kPassNames, kr.value_or<std::string>("pass", "forward"), kr.child_path("pass"));
        k.grad = parse_name(detail::kGradNames, kr.value_or<std::string>("grad", "none"), kr.child_path("grad"));
        k.layer = kr.value_or<int>("layer", -1);
        k.step = kr.value_or<int>("step", -1);
        if (kr.has("shard"))
        {
            FieldReader s(kr.at("shard"), kr.child_path("shard"));
            k.shard.data_dim =
                parse_name(detail::kDimNames, s.value_or<std::string>("data_dim", "none"), s.child_path("data_dim"));
            k.shard.tp_dim =
                parse_name(detail::kDimNames, s.value_or<std::string>("tp_dim", "none"), s.child_path("tp_dim"));
            k.shard.elementwise_data = s.value_or<bool>("elementwise_data", false);
            k.shard.elementwise_tp = s.value_or<bool>("elementwise_tp", false);
            s.finish();
        }
        kr.finish();
        g.kernels.push_back(std::move(k));
    }
    r.finish();
    if (!doc.at("metadata").contains("totals"))
        g.recompute_totals();
    return g;
}

}  // namespace llmperf::workload
