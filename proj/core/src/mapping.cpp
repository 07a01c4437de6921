// SPDX-FileCopyrightText: © 2026 The llmperf Authors
//
// SPDX-License-Identifier: Apache-2.0
#include "llmperf/mapping.hpp"

#include <algorithm>

namespace llmperf::mapping
{

using namespace llmperf::workload;

Violations validate_mapping(const MappingSpec &m, const ModelSpec &model, std::uint64_t batch, Phase phase)
{
    Violations v;
    auto at_least_one = [&](const char *field, int value) {
        if (value < 1)
            v.push_back({std::string("mapping.") + field, std::string(field) + " must be >= 1"});
        return value >= 1;
    };
    bool tp_ok = at_least_one("tp", m.tp);
    bool pp_ok = at_least_one("pp", m.pp);
    bool dp_ok = at_least_one("dp", m.dp);
    bool mb_ok = at_least_one("microbatches", m.microbatches);

    if (tp_ok)
    {
        if (model.num_heads % m.tp != 0)
            v.push_back({"mapping.tp", "tp must divide num_heads (" + std::to_string(model.num_heads) + ")"});
        if (model.ffn_dim % m.tp != 0)
            v.push_back({"mapping.tp", "tp must divide ffn_dim (" + std::to_string(model.ffn_dim) + ")"});
        if (model.kv_heads && *model.kv_heads % m.tp != 0)
            v.push_back({"mapping.tp", "tp must divide kv_heads"});
    }
    if (pp_ok && m.pp > model.num_layers)
        v.push_back({"mapping.pp", "pp must not exceed num_layers (" + std::to_string(model.num_layers) + ")"});
    if (dp_ok && mb_ok)
    {
        if (phase == Phase::training)
        {
            std::uint64_t split = static_cast<std::uint64_t>(m.dp) * m.microbatches;
            if (batch % split != 0)
                v.push_back({"mapping.microbatches", "dp * microbatches must divide batch (" +
                                                         std::to_string(batch) + ")"});
        }
        else if (batch % static_cast<std::uint64_t>(m.dp) != 0)
        {
            v.push_back({"mapping.dp", "dp must divide batch (" + std::to_string(batch) + ")"});
        }
    }
    return v;
}

Violations validate_mapping(const MappingSpec &m, const ModelSpec &model, std::uint64_t batch, Phase phase,
                            const hw::SystemSpec &sys)
{
    Violations v = validate_mapping(m, model, batch, phase);
    if (m.tp >= 1 && m.pp >= 1 && m.dp >= 1 && m.devices() != sys.device_count)
        v.push_back({"mapping", "tp * pp * dp must equal device_count (" + std::to_string(m.devices()) + " != " +
                                    std::to_string(sys.device_count) + ")"});
    return v;
}

std::vector<std::pair<int, int>> stage_layer_ranges(int num_layers, int pp)
{
    if (pp < 1 || pp > num_layers)
        throw ValidationError("mapping.pp", "pp must be in [1, num_layers]");
    std::vector<std::pair<int, int>> ranges;
    int base = num_layers / pp, extra = num_layers % pp, first = 0;
    for (int s = 0; s < pp; ++s)
    {
        int count = base + (s < extra ? 1 : 0);
        ranges.emplace_back(first, first + count);
        first += count;
    }
    return ranges;
}

WideCount MappedGraph::reassembled_useful_flops() const
{
    WideCount sum = 0;
    for (const auto &s : stages)
        sum += s.per_microbatch.exact_useful_flops() * static_cast<WideCount>(microbatches) +
               s.per_step.exact_useful_flops();
    return sum * static_cast<WideCount>(mapping.tp) * static_cast<WideCount>(mapping.dp);
}

std::size_t MappedGraph::count_kernels(KernelRole role) const
{
    std::size_t n = 0;
    for (const auto &s : stages)
    {
        for (const auto &k : s.per_microbatch.kernels)
            n += k.role == role;
        for (const auto &k : s.per_step.kernels)
            n += k.role == role;
    }
    return n;
}

namespace
{

std::uint64_t divide_exact(std::uint64_t value, std::uint64_t divisor, const Kernel &k)
{
    if (divisor == 0 || value % divisor != 0)
        throw ValidationError("mapping", "kernel " + k.id + " cannot be split evenly (" + std::to_string(value) +
                                             " by " + std::to_string(divisor) + ")");
    return value / divisor;
}

std::uint64_t &dim_ref(Gemm &g, GemmDim d)
{
    switch (d)
    {
        case GemmDim::m: return g.m;
        case GemmDim::n: return g.n;
        case GemmDim::k: return g.k;
        default: return g.batch_count;
    }
}

Kernel shard(Kernel k, std::uint64_t data_div, std::uint64_t tp, Precision precision)
{
    if (auto *g = std::get_if<Gemm>(&k.kind))
    {
        if (k.shard.data_dim != GemmDim::none)
        {
            auto &dim = dim_ref(*g, k.shard.data_dim);
            dim = divide_exact(dim, data_div, k);
        }
        if (k.shard.tp_dim != GemmDim::none)
        {
            auto &dim = dim_ref(*g, k.shard.tp_dim);
            dim = divide_exact(dim, tp, k);
        }
        refresh_gemm_operands(k, precision);
    }
    else if (auto *e = std::get_if<Elementwise>(&k.kind))
    {
        std::uint64_t div = (k.shard.elementwise_data ? data_div : 1) * (k.shard.elementwise_tp ? tp : 1);
        if (div > 1)
        {
            e->elements = divide_exact(e->elements, div, k);
            e->bytes_read = divide_exact(e->bytes_read, div, k);
            e->bytes_written = divide_exact(e->bytes_written, div, k);
            for (auto &op : k.operands)
                op.bytes = op.access == Access::read ? e->bytes_read : e->bytes_written;
        }
    }
    k.deps.clear();
    return k;
}

bool inserts_tp_allreduce(const Kernel &k)
{
    if (k.pass == Pass::backward)
        return k.grad == GradOf::input && (k.role == KernelRole::qkv_proj || k.role == KernelRole::ffn_up);
    return k.role == KernelRole::out_proj || k.role == KernelRole::ffn_down;
}

bool is_forward_like(Pass p) { return p == Pass::forward || p == Pass::prefill || p == Pass::decode; }

std::uint64_t stage_params(const ModelSpec &model, const Stage &s)
{
    return layer_param_count(model) * static_cast<std::uint64_t>(s.layers()) +
           (s.index == 0 ? embedding_param_count(model) : 0);
}

}  // namespace

MappedGraph apply_parallelism(const TaskGraph &g, const MappingSpec &m, const ModelSpec &model)
{
    const Phase phase = g.metadata.phase;
    throw_if_invalid(validate_mapping(m, model, g.metadata.batch, phase));

    MappedGraph mg;
    mg.mapping = m;
    mg.model = model;
    mg.source = g.metadata;
    mg.unsharded_useful_flops = g.exact_useful_flops();
    mg.microbatches = phase == Phase::training ? m.microbatches : 1;

    const Precision precision = g.metadata.precision;
    const std::uint64_t p = bytes_per_element(precision);
    const std::uint64_t tp = m.tp;
    const std::uint64_t data_div = static_cast<std::uint64_t>(m.dp) * mg.microbatches;
    const std::uint64_t local_batch = g.metadata.batch / data_div;
    const std::uint64_t h = model.hidden_dim;

    OptimizerModel opt;
    for (const auto &k : g.kernels)
        if (const auto *e = std::get_if<Elementwise>(&k.kind); e && k.role == KernelRole::weight_update && e->elements)
        {
            opt.read_bytes_per_param = e->bytes_read / e->elements;
            opt.write_bytes_per_param = e->bytes_written / e->elements;
            opt.flops_per_param = e->flops_per_element;
        }

    const auto ranges = stage_layer_ranges(model.num_layers, m.pp);
    for (int si = 0; si < m.pp; ++si)
    {
        Stage stage;
        stage.index = si;
        stage.first_layer = ranges[si].first;
        stage.end_layer = ranges[si].second;
        stage.per_microbatch.metadata = g.metadata;
        stage.per_microbatch.metadata.batch = local_batch;
        stage.per_step.metadata = stage.per_microbatch.metadata;

        auto in_stage = [&](const Kernel &k) {
            if (k.role == KernelRole::weight_update)
                return false;
            if (k.layer < 0)
                return si == 0;
            return k.layer >= stage.first_layer && k.layer < stage.end_layer;
        };

        std::vector<const Kernel *> picked;
        for (const auto &k : g.kernels)
            if (in_stage(k))
                picked.push_back(&k);

        TaskGraph &out = stage.per_microbatch;
        for (std::size_t i = 0; i < picked.size(); ++i)
        {
            const Kernel &src = *picked[i];
            Kernel k = shard(src, data_div, tp, precision);
            const bool allreduce = tp > 1 && inserts_tp_allreduce(k);
            const std::uint64_t out_bytes = k.is_gemm() ? k.operands[2].bytes : 0;
            const std::string id = k.id;
            out.chain(std::move(k));
            if (allreduce)
            {
                Kernel c = make_collective(id + ".allreduce", CollectiveOp::allreduce, out_bytes, m.tp);
                c.role = KernelRole::tp_allreduce;
                c.pass = src.pass;
                c.layer = src.layer;
                c.step = src.step;
                out.chain(std::move(c));
            }

            // Stage boundary: activations leave forward-like segments toward
            // the next stage, gradients leave backward segments toward the
            // previous one.
            const bool segment_end = i + 1 == picked.size() || picked[i + 1]->pass != src.pass ||
                                     picked[i + 1]->step != src.step;
            if (!segment_end || src.layer < 0)
                continue;
            const bool forward = is_forward_like(src.pass);
            if ((forward && si + 1 < m.pp) || (src.pass == Pass::backward && si > 0))
            {
                std::uint64_t rows = local_batch * (src.pass == Pass::decode ? 1 : g.metadata.seq_len);
                std::string name = "S" + std::to_string(si) + "." + std::string(to_string(src.pass));
                if (src.step >= 0)
                    name += ".D" + std::to_string(src.step);
                Kernel send = make_p2p(name + ".send", rows * h * p);
                send.role = KernelRole::stage_transfer;
                send.pass = src.pass;
                send.step = src.step;
                send.layer = forward ? stage.end_layer - 1 : stage.first_layer;
                out.chain(std::move(send));
            }
        }

        if (phase == Phase::training)
        {
            const std::uint64_t params = stage_params(model, stage) / tp;
            if (m.dp > 1)
            {
                Kernel c = make_collective("S" + std::to_string(si) + ".grad_allreduce", CollectiveOp::allreduce,
                                           params * p, m.dp);
                c.role = KernelRole::dp_allreduce;
                c.pass = Pass::update;
                stage.per_step.chain(std::move(c));
            }
            stage.per_step.chain(make_weight_update(params, opt, "update"));
        }
        stage.per_microbatch.recompute_totals();
        stage.per_step.recompute_totals();
        mg.stages.push_back(std::move(stage));
    }
    return mg;
}

FootprintReport memory_footprint(const MappedGraph &mg)
{
    FootprintReport report;
    report.devices = mg.mapping.devices();
    if (mg.stages.empty())
        return report;

    const ModelSpec &model = mg.model;
    const std::uint64_t p = bytes_per_element(mg.source.precision);
    const double tp = mg.mapping.tp;
    const double replicas = static_cast<double>(mg.mapping.tp) * mg.mapping.dp;
    const bool training = mg.phase() == Phase::training;
    Footprint sum;
    bool first = true;

    for (const auto &s : mg.stages)
    {
        Footprint f;
        const double params = static_cast<double>(stage_params(model, s)) / tp;
        f.weights = params * static_cast<double>(p);
        if (training)
            f.optimizer_state = params * static_cast<double>(mg.optimizer_state_bytes_per_param);

        double forward_writes = 0;
        for (const auto &k : s.per_microbatch.kernels)
            if (is_forward_like(k.pass) && k.step < 0)
                for (const auto &op : k.operands)
                    if (op.access == Access::write && op.tensor == TensorClass::activation)
                        forward_writes += static_cast<double>(op.bytes);
        if (training)
        {
            // Microbatches in flight at this stage under a one-forward-one-backward order.
            int live = std::min(mg.mapping.pp - s.index, mg.microbatches);
            f.activations = forward_writes * live;
        }
        else
        {
            f.activations = s.layers() > 0 ? forward_writes / s.layers() : 0;
            const std::uint64_t local_batch = mg.source.batch / static_cast<std::uint64_t>(mg.mapping.dp);
            const double tokens = static_cast<double>(mg.source.seq_len + mg.source.gen_tokens);
            f.kv_cache = 2.0 * s.layers() * tokens * static_cast<double>(local_batch) * model.kv_dim() *
                         static_cast<double>(p) / tp;
        }

        if (first || f.total() > report.per_device.total())
            report.per_device = f;
        first = false;
        sum.weights += f.weights * replicas;
        sum.activations += f.activations * replicas;
        sum.optimizer_state += f.optimizer_state * replicas;
        sum.kv_cache += f.kv_cache * replicas;
    }
    const double n = report.devices;
    report.mean_per_device = {sum.weights / n, sum.activations / n, sum.optimizer_state / n, sum.kv_cache / n};
    return report;
}

FitReport check_fit(const FootprintReport &fp, const hw::SystemSpec &sys)
{
    FitReport fit;
    fit.capacity_per_device = hw::main_memory_share(sys);
    fit.footprint_per_device = fp.per_device.total();
    fit.headroom_per_device = fit.capacity_per_device - fit.footprint_per_device;
    fit.feasible = fit.footprint_per_device <= fit.capacity_per_device;
    fit.capacity_total = sys.main_memory.capacity;
    fit.footprint_total = fp.mean_per_device.total() * fp.devices;
    return fit;
}

FitReport check_fit(const MappedGraph &mg, const hw::SystemSpec &sys) { return check_fit(memory_footprint(mg), sys); }

json to_json(const MappingSpec &m)
{
    return {{"tp", m.tp}, {"pp", m.pp}, {"dp", m.dp}, {"microbatches", m.microbatches}};
}

MappingSpec mapping_from_json(const json &doc, const std::string &path)
{
    FieldReader r(doc, path);
    MappingSpec m;
    m.tp = r.value_or("tp", 1);
    m.pp = r.value_or("pp", 1);
    m.dp = r.value_or("dp", 1);
    m.microbatches = r.value_or("microbatches", 1);
    r.finish();
    return m;
}

json to_json(const MappedGraph &mg)
{
    json stages = json::array();
    for (const auto &s : mg.stages)
        stages.push_back({{"index", s.index},
                          {"first_layer", s.first_layer},
                          {"end_layer", s.end_layer},
                          {"per_microbatch", to_json(s.per_microbatch)},
                          {"per_step", to_json(s.per_step)}});
    return {{"mapping", to_json(mg.mapping)},
            {"model", mg.model.name},
            {"microbatches", mg.microbatches},
            {"stages", std::move(stages)}};
}

namespace
{

json footprint_json(const Footprint &f)
{
    return {{"weights", f.weights},
            {"activations", f.activations},
            {"optimizer_state", f.optimizer_state},
            {"kv_cache", f.kv_cache},
            {"total", f.total()}};
}

}  // namespace

json to_json(const FootprintReport &fp)
{
    return {{"per_device", footprint_json(fp.per_device)},
            {"mean_per_device", footprint_json(fp.mean_per_device)},
            {"devices", fp.devices}};
}

json to_json(const FitReport &fit)
{
    return {{"feasible", fit.feasible},
            {"capacity_per_device", fit.capacity_per_device},
            {"footprint_per_device", fit.footprint_per_device},
            {"headroom_per_device", fit.headroom_per_device},
            {"capacity_total", fit.capacity_total},
            {"footprint_total", fit.footprint_total}};
}

}  // namespace llmperf::mapping
