// SPDX-FileCopyrightText: © 2026 The llmperf Authors
//
// SPDX-License-Identifier: Apache-2.0
#include <string>

#include "llmperf/workload.hpp"

namespace llmperf::workload
{

namespace
{

constexpr std::uint64_t kLayerNormFlops = 8;
constexpr std::uint64_t kSoftmaxFlops = 5;
constexpr std::uint64_t kResidualFlops = 1;

using TC = TensorClass;

struct Builder
{
    const ModelSpec &model;
    Precision precision;
    std::uint64_t p;
    TaskGraph graph;

    Builder(const ModelSpec &m, const WorkloadSpec &wl) :
        model(m), precision(wl.precision), p(bytes_per_element(wl.precision))
    {
        graph.metadata.phase = wl.phase;
        graph.metadata.model = m.name;
        graph.metadata.precision = wl.precision;
        graph.metadata.batch = wl.batch;
        graph.metadata.seq_len = wl.seq_len;
        graph.metadata.gen_tokens = wl.phase == Phase::inference ? wl.gen_tokens : 0;
    }

    std::string prefix(Pass pass, int layer, int step) const
    {
        std::string id = step >= 0 ? "D" + std::to_string(step) + "." : "";
        id += "L" + std::to_string(layer) + ".";
        switch (pass)
        {
            case Pass::forward: return id + "fwd.";
            case Pass::backward: return id + "bwd.";
            case Pass::prefill: return id + "prefill.";
            default: return id;
        }
    }

    void tag(Kernel &k, KernelRole role, Pass pass, int layer, int step)
    {
        k.role = role;
        k.pass = pass;
        k.layer = layer;
        k.step = step;
    }

    // One read and one write of `elements` values.
    void elementwise(KernelRole role, Pass pass, int layer, int step, std::uint64_t elements,
                     std::uint64_t flops_per_element, TC out, bool shard_tp)
    {
        Elementwise e{elements, flops_per_element, elements * p, elements * p};
        Kernel k = make_elementwise(prefix(pass, layer, step) + std::string(to_string(role)), e, TC::activation, out);
        tag(k, role, pass, layer, step);
        k.shard.elementwise_data = true;
        k.shard.elementwise_tp = shard_tp;
        graph.chain(std::move(k));
    }

    void gemm(KernelRole role, Pass pass, int layer, int step, Gemm shape, TC b, GemmDim data_dim, GemmDim tp_dim)
    {
        Kernel k = make_gemm(prefix(pass, layer, step) + std::string(to_string(role)), shape, precision,
                             TC::activation, b, TC::activation);
        tag(k, role, pass, layer, step);
        k.shard.data_dim = data_dim;
        k.shard.tp_dim = tp_dim;
        graph.chain(std::move(k));
    }

    // Forward kernels of one layer over `tokens` = batch * q rows, attending
    // to `context` keys. `kv` is the class of the K/V operands.
    void layer(Pass pass, int l, int step, std::uint64_t batch, std::uint64_t q, std::uint64_t context, TC kv,
               bool append_kv)
    {
        const std::uint64_t h = model.hidden_dim;
        const std::uint64_t heads = model.num_heads;
        const std::uint64_t d = model.head_dim;
        const std::uint64_t kv_dim = model.kv_dim();
        const std::uint64_t ffn = model.ffn_dim;
        const std::uint64_t experts = model.active_experts();
        const std::uint64_t tokens = batch * q;

        elementwise(KernelRole::ln_attn, pass, l, step, tokens * h, kLayerNormFlops, TC::activation, false);
        gemm(KernelRole::qkv_proj, pass, l, step, {tokens, h + 2 * kv_dim, h, 1}, TC::weight, GemmDim::m, GemmDim::n);
        if (append_kv)
            elementwise(KernelRole::kv_append, pass, l, step, 2 * tokens * kv_dim, 0, TC::kv_cache, true);
        gemm(KernelRole::attn_score, pass, l, step, {q, context, d, batch * heads}, kv, GemmDim::batch,
             GemmDim::batch);
        elementwise(KernelRole::softmax, pass, l, step, batch * heads * q * context, kSoftmaxFlops, TC::activation,
                    true);
        gemm(KernelRole::attn_context, pass, l, step, {q, d, context, batch * heads}, kv, GemmDim::batch,
             GemmDim::batch);
        gemm(KernelRole::out_proj, pass, l, step, {tokens, h, h, 1}, TC::weight, GemmDim::m, GemmDim::k);
        elementwise(KernelRole::residual_attn, pass, l, step, tokens * h, kResidualFlops, TC::activation, false);
        elementwise(KernelRole::ln_ffn, pass, l, step, tokens * h, kLayerNormFlops, TC::activation, false);
        gemm(KernelRole::ffn_up, pass, l, step, {tokens, ffn, h, experts}, TC::weight, GemmDim::m, GemmDim::n);
        gemm(KernelRole::ffn_down, pass, l, step, {tokens, h, ffn, experts}, TC::weight, GemmDim::m, GemmDim::k);
        elementwise(KernelRole::residual_ffn, pass, l, step, tokens * h, kResidualFlops, TC::activation, false);
    }

    static GemmDim remap(GemmDim d, GemmDim to_m, GemmDim to_n, GemmDim to_k)
    {
        switch (d)
        {
            case GemmDim::m: return to_m;
            case GemmDim::n: return to_n;
            case GemmDim::k: return to_k;
            default: return d;
        }
    }

    // dX = dY * W^T has shape (m, k, n); dW = X^T * dY has shape (k, n, m).
    void backward_of(const Kernel &fwd)
    {
        const Gemm &g = std::get<Gemm>(fwd.kind);
        const TC b_class = fwd.operands[1].tensor;
        const std::string base = prefix(Pass::backward, fwd.layer, -1) + std::string(to_string(fwd.role));

        Kernel dx = make_gemm(base + ".dgrad", {g.m, g.k, g.n, g.batch_count}, precision, TC::activation, b_class,
                              TC::activation);
        tag(dx, fwd.role, Pass::backward, fwd.layer, -1);
        dx.grad = GradOf::input;
        // forward m -> m, n -> k, k -> n
        dx.shard.data_dim = remap(fwd.shard.data_dim, GemmDim::m, GemmDim::k, GemmDim::n);
        dx.shard.tp_dim = remap(fwd.shard.tp_dim, GemmDim::m, GemmDim::k, GemmDim::n);
        graph.chain(std::move(dx));

        TC out = b_class == TC::weight ? TC::gradient : TC::activation;
        Kernel dw = make_gemm(base + ".wgrad", {g.k, g.n, g.m, g.batch_count}, precision, TC::activation,
                              TC::activation, out);
        tag(dw, fwd.role, Pass::backward, fwd.layer, -1);
        dw.grad = GradOf::weight;
        // forward m -> k, n -> n, k -> m
        dw.shard.data_dim = remap(fwd.shard.data_dim, GemmDim::k, GemmDim::n, GemmDim::m);
        dw.shard.tp_dim = remap(fwd.shard.tp_dim, GemmDim::k, GemmDim::n, GemmDim::m);
        graph.chain(std::move(dw));
    }

    TaskGraph finish()
    {
        graph.recompute_totals();
        return std::move(graph);
    }
};

void require_valid(const ModelSpec &model, const WorkloadSpec &wl, Phase phase)
{
    if (wl.phase != phase)
        throw ValidationError("workload.phase", "expected a " + std::string(to_string(phase)) + " workload");
    throw_if_invalid(validate_model(model));
    throw_if_invalid(validate_workload(wl));
}

}  // namespace

Kernel make_weight_update(std::uint64_t params, const OptimizerModel &opt, std::string id)
{
    Elementwise e{params, opt.flops_per_param, params * opt.read_bytes_per_param,
                  params * opt.write_bytes_per_param};
    Kernel k = make_elementwise(std::move(id), e, TensorClass::optimizer_state, TensorClass::weight);
    k.role = KernelRole::weight_update;
    k.pass = Pass::update;
    return k;
}

TaskGraph build_training_graph(const ModelSpec &model, const WorkloadSpec &wl)
{
    require_valid(model, wl, Phase::training);
    Builder b(model, wl);
    for (int l = 0; l < model.num_layers; ++l)
        b.layer(Pass::forward, l, -1, wl.batch, wl.seq_len, wl.seq_len, TC::activation, false);

    const std::size_t forward_end = b.graph.kernels.size();
    for (std::size_t i = forward_end; i-- > 0;)
    {
        if (b.graph.kernels[i].is_gemm())
        {
            Kernel fwd = b.graph.kernels[i];
            b.backward_of(fwd);
        }
    }

    b.graph.chain(make_weight_update(param_count(model), wl.optimizer, "update"));
    return b.finish();
}

TaskGraph build_inference_graph(const ModelSpec &model, const WorkloadSpec &wl)
{
    require_valid(model, wl, Phase::inference);
    Builder b(model, wl);
    for (int l = 0; l < model.num_layers; ++l)
        b.layer(Pass::prefill, l, -1, wl.batch, wl.seq_len, wl.seq_len, TC::kv_cache, true);
    for (std::uint64_t j = 0; j < wl.gen_tokens; ++j)
    {
        const std::uint64_t context = wl.seq_len + j + 1;
        for (int l = 0; l < model.num_layers; ++l)
            b.layer(Pass::decode, l, static_cast<int>(j), wl.batch, 1, context, TC::kv_cache, true);
    }
    return b.finish();
}

TaskGraph build_graph(const ModelSpec &model, const WorkloadSpec &wl)
{
    return wl.phase == Phase::training ? build_training_graph(model, wl) : build_inference_graph(model, wl);
}

}  // namespace llmperf::workload
