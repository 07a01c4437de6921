// SPDX-FileCopyrightText: © 2026 The llmperf Authors
//
// SPDX-License-Identifier: Apache-2.0
#include "llmperf/workload.hpp"

#include <algorithm>
#include <cmath>

#include "enum_names.hpp"

namespace llmperf::workload
{

namespace
{

struct PresetRow
{
    std::string_view name;
    int layers, hidden, heads, head_dim, ffn, vocab;
    int experts, active;
};

// Gated FFNs are stored as an equivalent two-matrix width. With full-width
// K/V projections the widths are set so the totals land on the headline sizes.
// gpt3-18b/39b are the two smaller members of the GPT training set; their
// shapes follow the usual depth/width progression up to gpt3-76b.
constexpr std::array<PresetRow, 9> kModelPresets{{
    {"gpt3-18b", 40, 6144, 48, 128, 24576, 51200, 1, 1},
    {"gpt3-39b", 48, 8192, 64, 128, 32768, 51200, 1, 1},
    {"gpt3-76b", 60, 10240, 80, 128, 40960, 51200, 1, 1},
    {"llama-405b", 126, 16384, 128, 128, 65536, 128256, 1, 1},
    {"llama-70b", 80, 8192, 64, 128, 36864, 128256, 1, 1},
    {"llama2-7b", 32, 4096, 32, 128, 17024, 32000, 1, 1},
    {"llama2-13b", 40, 5120, 40, 128, 21120, 32000, 1, 1},
    {"llama2-70b", 80, 8192, 64, 128, 36864, 32000, 1, 1},
    // 16 experts, 4 active; 96-wide heads keep the head count a multiple of 64.
    {"moe-132b", 40, 6144, 64, 96, 16128, 100352, 16, 4},
}};

}  // namespace

Violations validate_model(const ModelSpec &m)
{
    Violations v;
    auto positive = [&](const char *field, long value) {
        if (value <= 0)
            v.push_back({field, std::string(field) + " must be > 0"});
    };
    positive("num_layers", m.num_layers);
    positive("hidden_dim", m.hidden_dim);
    positive("num_heads", m.num_heads);
    positive("head_dim", m.head_dim);
    positive("ffn_dim", m.ffn_dim);
    if (m.vocab_size < 0)
        v.push_back({"vocab_size", "vocab_size must be >= 0"});
    if (m.num_heads > 0 && m.head_dim > 0 && m.hidden_dim > 0 &&
        static_cast<long>(m.num_heads) * m.head_dim != m.hidden_dim)
        v.push_back({"head_dim", "num_heads * head_dim must equal hidden_dim"});
    if (m.moe)
    {
        if (m.moe->num_experts < 1)
            v.push_back({"moe.num_experts", "moe.num_experts must be >= 1"});
        if (m.moe->active_experts < 1)
            v.push_back({"moe.active_experts", "moe.active_experts must be >= 1"});
        else if (m.moe->num_experts >= 1 && m.moe->active_experts > m.moe->num_experts)
            v.push_back({"moe.active_experts", "moe.active_experts must be <= moe.num_experts"});
    }
    if (m.kv_heads)
    {
        if (*m.kv_heads < 1)
            v.push_back({"kv_heads", "kv_heads must be >= 1"});
        else if (m.num_heads > 0 && m.num_heads % *m.kv_heads != 0)
            v.push_back({"kv_heads", "kv_heads must divide num_heads"});
    }
    return v;
}

std::vector<std::string> model_preset_names()
{
    std::vector<std::string> names;
    for (const auto &row : kModelPresets)
        names.emplace_back(row.name);
    return names;
}

bool is_model_preset(std::string_view name)
{
    return std::any_of(kModelPresets.begin(), kModelPresets.end(), [&](const auto &r) { return r.name == name; });
}

ModelSpec model_preset(std::string_view name)
{
    for (const auto &row : kModelPresets)
    {
        if (row.name != name)
            continue;
        ModelSpec m;
        m.name = std::string(row.name);
        m.num_layers = row.layers;
        m.hidden_dim = row.hidden;
        m.num_heads = row.heads;
        m.head_dim = row.head_dim;
        m.ffn_dim = row.ffn;
        m.vocab_size = row.vocab;
        if (row.experts > 1)
            m.moe = MoeSpec{row.experts, row.active};
        return m;
    }
    std::string options;
    for (const auto &n : model_preset_names())
        options += (options.empty() ? "" : ", ") + n;
    throw ValidationError("model", "unknown model preset '" + std::string(name) + "' (available: " + options + ")");
}

namespace
{

std::uint64_t attention_params(const ModelSpec &m)
{
    std::uint64_t h = m.hidden_dim;
    return 2 * h * h + 2 * h * static_cast<std::uint64_t>(m.kv_dim());
}

std::uint64_t ffn_params(const ModelSpec &m, int experts)
{
    return 2ULL * m.hidden_dim * static_cast<std::uint64_t>(m.ffn_dim) * experts;
}

}  // namespace

std::uint64_t layer_param_count(const ModelSpec &m) { return attention_params(m) + ffn_params(m, m.total_experts()); }

std::uint64_t layer_active_param_count(const ModelSpec &m)
{
    return attention_params(m) + ffn_params(m, m.active_experts());
}

std::uint64_t embedding_param_count(const ModelSpec &m)
{
    return static_cast<std::uint64_t>(m.vocab_size) * m.hidden_dim;
}

std::uint64_t param_count(const ModelSpec &m)
{
    return layer_param_count(m) * m.num_layers + embedding_param_count(m);
}

std::uint64_t active_param_count(const ModelSpec &m)
{
    return layer_active_param_count(m) * m.num_layers + embedding_param_count(m);
}

std::uint64_t kv_cache_bytes(const ModelSpec &m, std::uint64_t batch, std::uint64_t tokens, Precision precision)
{
    return 2ULL * m.num_layers * tokens * batch * static_cast<std::uint64_t>(m.kv_dim()) *
           bytes_per_element(precision);
}

std::uint64_t implied_kv_tokens(const ModelSpec &m, std::uint64_t batch, double target_bytes, Precision precision)
{
    double per_token = static_cast<double>(kv_cache_bytes(m, batch, 1, precision));
    if (per_token <= 0 || target_bytes <= 0)
        return 0;
    auto tokens = static_cast<std::uint64_t>(std::ceil(target_bytes / per_token));
    while (tokens > 0 && static_cast<double>(kv_cache_bytes(m, batch, tokens - 1, precision)) >= target_bytes)
        --tokens;
    return tokens;
}

Violations validate_workload(const WorkloadSpec &wl)
{
    Violations v;
    if (wl.batch < 1)
        v.push_back({"batch", "batch must be >= 1"});
    if (wl.seq_len < 1)
        v.push_back({"seq_len", "seq_len must be >= 1"});
    if (wl.phase == Phase::training)
    {
        if (wl.microbatches < 1)
            v.push_back({"microbatches", "microbatches must be >= 1"});
        else if (wl.batch >= 1 && wl.batch % wl.microbatches != 0)
            v.push_back({"microbatches", "microbatches must divide batch"});
    }
    return v;
}

// ---------------------------------------------------------------------------

std::uint64_t kernel_flops(const Kernel &k)
{
    if (const auto *g = std::get_if<Gemm>(&k.kind))
        return 2 * g->m * g->n * g->k * g->batch_count;
    if (const auto *e = std::get_if<Elementwise>(&k.kind))
        return e->elements * e->flops_per_element;
    return 0;
}

KernelBytes kernel_bytes(const Kernel &k, Precision precision)
{
    const std::uint64_t p = bytes_per_element(precision);
    if (const auto *g = std::get_if<Gemm>(&k.kind))
        return {(g->m * g->k + g->k * g->n) * g->batch_count * p, g->m * g->n * g->batch_count * p};
    if (const auto *e = std::get_if<Elementwise>(&k.kind))
        return {e->bytes_read, e->bytes_written};
    if (const auto *c = std::get_if<Collective>(&k.kind))
        return {c->payload, 0};
    return {std::get<P2P>(k.kind).payload, 0};
}

void refresh_gemm_operands(Kernel &k, Precision precision)
{
    const auto &g = std::get<Gemm>(k.kind);
    const std::uint64_t p = bytes_per_element(precision);
    k.operands.resize(3);
    k.operands[0].bytes = g.m * g.k * g.batch_count * p;
    k.operands[0].access = Access::read;
    k.operands[1].bytes = g.k * g.n * g.batch_count * p;
    k.operands[1].access = Access::read;
    k.operands[2].bytes = g.m * g.n * g.batch_count * p;
    k.operands[2].access = Access::write;
    k.useful_flops = kernel_flops(k);
}

Kernel make_gemm(std::string id, Gemm shape, Precision precision, TensorClass a, TensorClass b, TensorClass c)
{
    Kernel k;
    k.id = std::move(id);
    k.kind = shape;
    k.operands = {{0, Access::read, a, {}}, {0, Access::read, b, {}}, {0, Access::write, c, {}}};
    refresh_gemm_operands(k, precision);
    return k;
}

Kernel make_elementwise(std::string id, Elementwise e, TensorClass input, TensorClass output)
{
    Kernel k;
    k.id = std::move(id);
    k.kind = e;
    k.operands = {{e.bytes_read, Access::read, input, {}}, {e.bytes_written, Access::write, output, {}}};
    return k;
}

Kernel make_collective(std::string id, CollectiveOp op, std::uint64_t payload, int group_size)
{
    Kernel k;
    k.id = std::move(id);
    k.kind = Collective{op, payload, group_size};
    return k;
}

Kernel make_p2p(std::string id, std::uint64_t payload)
{
    Kernel k;
    k.id = std::move(id);
    k.kind = P2P{payload};
    return k;
}

std::uint32_t TaskGraph::append(Kernel k)
{
    kernels.push_back(std::move(k));
    return static_cast<std::uint32_t>(kernels.size() - 1);
}

std::uint32_t TaskGraph::chain(Kernel k)
{
    if (!kernels.empty())
        k.deps = {static_cast<std::uint32_t>(kernels.size() - 1)};
    return append(std::move(k));
}

void TaskGraph::recompute_totals()
{
    GraphTotals t;
    WideCount read = 0, written = 0;
    for (const auto &k : kernels)
    {
        KernelBytes b = kernel_bytes(k, metadata.precision);
        read += b.read;
        written += b.written;
    }
    t.flops = to_double(exact_flops());
    t.useful_flops = to_double(exact_useful_flops());
    t.bytes_read = to_double(read);
    t.bytes_written = to_double(written);
    metadata.totals = t;
}

WideCount TaskGraph::exact_useful_flops() const
{
    WideCount sum = 0;
    for (const auto &k : kernels)
        sum += k.useful_flops;
    return sum;
}

WideCount TaskGraph::exact_flops() const
{
    WideCount sum = 0;
    for (const auto &k : kernels)
        sum += kernel_flops(k);
    return sum;
}

bool is_acyclic(const TaskGraph &g)
{
    // Kahn's algorithm; tolerates deps that point forward.
    const std::size_t n = g.kernels.size();
    std::vector<std::vector<std::uint32_t>> users(n);
    std::vector<std::size_t> indegree(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (auto d : g.kernels[i].deps)
        {
            if (d >= n)
                return false;
            users[d].push_back(static_cast<std::uint32_t>(i));
            ++indegree[i];
        }
    std::vector<std::uint32_t> ready;
    for (std::size_t i = 0; i < n; ++i)
        if (indegree[i] == 0)
            ready.push_back(static_cast<std::uint32_t>(i));
    std::size_t visited = 0;
    while (!ready.empty())
    {
        auto i = ready.back();
        ready.pop_back();
        ++visited;
        for (auto u : users[i])
            if (--indegree[u] == 0)
                ready.push_back(u);
    }
    return visited == n;
}

Violations validate_graph(const TaskGraph &g)
{
    Violations v;
    const std::size_t n = g.kernels.size();
    for (std::size_t i = 0; i < n; ++i)
    {
        const Kernel &k = g.kernels[i];
        const std::string where = "kernels[" + std::to_string(i) + "]";
        for (auto d : k.deps)
            if (d >= n || d == i)
                v.push_back({where + ".deps", "dependency index out of range or self-referential"});
        if (k.is_gemm() && k.useful_flops != kernel_flops(k))
            v.push_back({where + ".useful_flops", "gemm useful_flops must equal 2*m*n*k*batch_count"});
        if (const auto *c = std::get_if<Collective>(&k.kind); c && c->group_size < 1)
            v.push_back({where + ".group_size", "group_size must be >= 1"});
        if (!k.is_communication())
        {
            KernelBytes expected = kernel_bytes(k, g.metadata.precision);
            std::uint64_t read = 0, written = 0;
            for (const auto &op : k.operands)
                (op.access == Access::read ? read : written) += op.bytes;
            if (read != expected.read || written != expected.written)
                v.push_back({where + ".operands", "operand bytes must match the kernel's byte counts"});
        }
    }
    if (!is_acyclic(g))
        v.push_back({"kernels", "dependency graph has a cycle"});
    TaskGraph copy;
    copy.metadata = g.metadata;
    GraphTotals recorded = g.metadata.totals;
    copy.kernels = g.kernels;
    copy.recompute_totals();
    if (copy.metadata.totals != recorded)
        v.push_back({"metadata.totals", "totals must equal the sums over kernels"});
    return v;
}

std::string_view to_string(Phase p) { return detail::name_of(detail::kPhaseNames, p); }
std::string_view to_string(KernelRole r) { return detail::name_of(detail::kRoleNames, r); }
std::string_view to_string(Pass p) { return detail::name_of(detail::kPassNames, p); }
std::string_view to_string(TensorClass t) { return detail::name_of(detail::kTensorNames, t); }

json to_json(const ModelSpec &m)
{
    json doc = {{"name", m.name},
                {"num_layers", m.num_layers},
                {"hidden_dim", m.hidden_dim},
                {"num_heads", m.num_heads},
                {"head_dim", m.head_dim},
                {"ffn_dim", m.ffn_dim},
                {"vocab_size", m.vocab_size},
                {"moe", nullptr},
                {"kv_heads", nullptr},
                {"default_precision", std::string(llmperf::to_string(m.default_precision))}};
    if (m.moe)
        doc["moe"] = {{"num_experts", m.moe->num_experts}, {"active_experts", m.moe->active_experts}};
    if (m.kv_heads)
        doc["kv_heads"] = *m.kv_heads;
    return doc;
}

ModelSpec model_from_json(const json &doc, const std::string &path)
{
    FieldReader r(doc, path);
    ModelSpec m;
    m.name = r.value_or<std::string>("name", "");
    m.num_layers = r.required<int>("num_layers");
    m.hidden_dim = r.required<int>("hidden_dim");
    m.num_heads = r.required<int>("num_heads");
    m.head_dim = r.required<int>("head_dim");
    m.ffn_dim = r.required<int>("ffn_dim");
    m.vocab_size = r.value_or<int>("vocab_size", 0);
    if (r.has("moe") && !doc.at("moe").is_null())
    {
        FieldReader moe(r.at("moe"), r.child_path("moe"));
        m.moe = MoeSpec{moe.required<int>("num_experts"), moe.required<int>("active_experts")};
        moe.finish();
    }
    else
    {
        r.optional<json>("moe");
    }
    m.kv_heads = r.optional<int>("kv_heads");
    m.default_precision = parse_precision(r.value_or<std::string>("default_precision", "bf16"));
    r.finish();
    return m;
}

json to_json(const WorkloadSpec &wl)
{
    return {{"phase", std::string(to_string(wl.phase))},
            {"batch", wl.batch},
            {"seq_len", wl.seq_len},
            {"gen_tokens", wl.gen_tokens},
            {"microbatches", wl.microbatches},
            {"precision", std::string(llmperf::to_string(wl.precision))},
            {"optimizer",
             {{"read_bytes_per_param", wl.optimizer.read_bytes_per_param},
              {"write_bytes_per_param", wl.optimizer.write_bytes_per_param},
              {"flops_per_param", wl.optimizer.flops_per_param},
              {"state_bytes_per_param", wl.optimizer.state_bytes_per_param}}}};
}

WorkloadSpec workload_from_json(const json &doc, const std::string &path)
{
    FieldReader r(doc, path);
    WorkloadSpec wl;
    wl.phase = detail::parse_name(detail::kPhaseNames, r.required<std::string>("phase"), r.child_path("phase"));
    wl.batch = r.required<std::uint64_t>("batch");
    wl.seq_len = r.required<std::uint64_t>("seq_len");
    wl.gen_tokens = r.value_or<std::uint64_t>("gen_tokens", 0);
    wl.microbatches = r.value_or<std::uint64_t>("microbatches", 1);
    wl.precision = parse_precision(r.value_or<std::string>("precision", "bf16"));
    if (r.has("optimizer"))
    {
        FieldReader o(r.at("optimizer"), r.child_path("optimizer"));
        wl.optimizer.read_bytes_per_param = o.value_or("read_bytes_per_param", wl.optimizer.read_bytes_per_param);
        wl.optimizer.write_bytes_per_param = o.value_or("write_bytes_per_param", wl.optimizer.write_bytes_per_param);
        wl.optimizer.flops_per_param = o.value_or("flops_per_param", wl.optimizer.flops_per_param);
        wl.optimizer.state_bytes_per_param = o.value_or("state_bytes_per_param", wl.optimizer.state_bytes_per_param);
        o.finish();
    }
    r.finish();
    return wl;
}

}  // namespace llmperf::workload
