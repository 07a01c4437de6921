// SPDX-FileCopyrightText: © 2026 The llmperf Authors
//
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "llmperf/error.hpp"
#include "llmperf/json_fields.hpp"
#include "llmperf/precision.hpp"

namespace llmperf::workload
{

// Exact accumulator for graph-wide flop and byte totals; a 76B-parameter
// training step is ~1e20 flops, past both uint64 and the exact range of double.
__extension__ using WideCount = unsigned __int128;

inline double to_double(WideCount v) { return static_cast<double>(v); }

struct MoeSpec
{
    int num_experts = 1;
    int active_experts = 1;

    bool operator==(const MoeSpec &) const = default;
};

struct ModelSpec
{
    std::string name;
    int num_layers = 0;
    int hidden_dim = 0;
    int num_heads = 0;
    int head_dim = 0;
    int ffn_dim = 0;  // width of a two-matrix FFN (gated FFNs use the 1.5x equivalent)
    int vocab_size = 0;
    std::optional<MoeSpec> moe;
    std::optional<int> kv_heads;  // grouped-KV; unset means kv_heads == num_heads
    Precision default_precision = Precision::bf16;

    int kv_dim() const { return (kv_heads ? *kv_heads : num_heads) * head_dim; }
    int total_experts() const { return moe ? moe->num_experts : 1; }
    int active_experts() const { return moe ? moe->active_experts : 1; }

    bool operator==(const ModelSpec &) const = default;
};

Violations validate_model(const ModelSpec &model);

std::vector<std::string> model_preset_names();
bool is_model_preset(std::string_view name);
// Throws ValidationError listing the available presets for unknown names.
ModelSpec model_preset(std::string_view name);

// Closed forms, per layer:
//   attention: h*h (Q) + 2*h*kv_dim (K, V) + h*h (output); 4h^2 without grouped KV
//   FFN:       2*h*ffn per expert (all experts for the total count)
// plus vocab*h for the embedding table (counted once).
std::uint64_t layer_param_count(const ModelSpec &model);
std::uint64_t layer_active_param_count(const ModelSpec &model);
std::uint64_t embedding_param_count(const ModelSpec &model);
std::uint64_t param_count(const ModelSpec &model);
std::uint64_t active_param_count(const ModelSpec &model);

// 2 (K and V) * layers * tokens * batch * kv_dim * bytes_per_element.
std::uint64_t kv_cache_bytes(const ModelSpec &model, std::uint64_t batch, std::uint64_t tokens,
                             Precision precision);

// Smallest token count whose KV cache reaches `target_bytes` at this batch.
std::uint64_t implied_kv_tokens(const ModelSpec &model, std::uint64_t batch, double target_bytes,
                                Precision precision);

enum class Phase
{
    training,
    inference,
};

// Optimizer traffic and state per parameter (bf16 weights and gradients with
// fp32 Adam moments by default).
struct OptimizerModel
{
    std::uint64_t read_bytes_per_param = 16;
    std::uint64_t write_bytes_per_param = 8;
    std::uint64_t flops_per_param = 10;
    std::uint64_t state_bytes_per_param = 14;

    bool operator==(const OptimizerModel &) const = default;
};

struct WorkloadSpec
{
    Phase phase = Phase::training;
    std::uint64_t batch = 1;
    std::uint64_t seq_len = 1;
    std::uint64_t gen_tokens = 0;
    std::uint64_t microbatches = 1;
    Precision precision = Precision::bf16;
    OptimizerModel optimizer;

    bool operator==(const WorkloadSpec &) const = default;
};

Violations validate_workload(const WorkloadSpec &wl);

// ---------------------------------------------------------------------------
// Kernels and task graphs

enum class TensorClass
{
    activation,
    weight,
    gradient,
    optimizer_state,
    kv_cache,
};

enum class Access
{
    read,
    write,
};

enum class ResidencyHint
{
    streamed,
    cacheable,
};

struct Operand
{
    std::uint64_t bytes = 0;
    Access access = Access::read;
    TensorClass tensor = TensorClass::activation;
    std::optional<ResidencyHint> hint;

    bool operator==(const Operand &) const = default;
};

struct Gemm
{
    std::uint64_t m = 0, n = 0, k = 0, batch_count = 1;
    bool operator==(const Gemm &) const = default;
};

struct Elementwise
{
    std::uint64_t elements = 0;
    std::uint64_t flops_per_element = 0;
    std::uint64_t bytes_read = 0;
    std::uint64_t bytes_written = 0;
    bool operator==(const Elementwise &) const = default;
};

enum class CollectiveOp
{
    allreduce,
    allgather,
};

struct Collective
{
    CollectiveOp op = CollectiveOp::allreduce;
    std::uint64_t payload = 0;
    int group_size = 1;
    bool operator==(const Collective &) const = default;
};

struct P2P
{
    std::uint64_t payload = 0;
    bool operator==(const P2P &) const = default;
};

using KernelKind = std::variant<Gemm, Elementwise, Collective, P2P>;

enum class KernelRole
{
    ln_attn,
    qkv_proj,
    kv_append,
    attn_score,
    softmax,
    attn_context,
    out_proj,
    residual_attn,
    ln_ffn,
    ffn_up,
    ffn_down,
    residual_ffn,
    weight_update,
    tp_allreduce,
    dp_allreduce,
    stage_transfer,
    custom,
};

enum class Pass
{
    forward,
    backward,
    update,
    prefill,
    decode,
};

enum class GradOf
{
    none,
    input,
    weight,
};

enum class GemmDim
{
    none,
    m,
    n,
    k,
    batch,
};

// Which dimension a kernel is divided along when sharded: `data` by the
// per-device token share (dp * microbatches), `tp` by the tensor-parallel
// degree. Elementwise kernels split their element count.
struct ShardRule
{
    GemmDim data_dim = GemmDim::none;
    GemmDim tp_dim = GemmDim::none;
    bool elementwise_data = false;
    bool elementwise_tp = false;

    bool operator==(const ShardRule &) const = default;
};

struct Kernel
{
    std::string id;
    KernelKind kind;
    // Gemm operands are always {A (m x k), B (k x n), C (m x n)}.
    std::vector<Operand> operands;
    std::vector<std::uint32_t> deps;  // indices of earlier kernels in the graph
    std::uint64_t useful_flops = 0;
    KernelRole role = KernelRole::custom;
    Pass pass = Pass::forward;
    GradOf grad = GradOf::none;
    int layer = -1;
    int step = -1;  // decode step, -1 elsewhere
    ShardRule shard;

    bool is_gemm() const { return std::holds_alternative<Gemm>(kind); }
    bool is_communication() const
    {
        return std::holds_alternative<Collective>(kind) || std::holds_alternative<P2P>(kind);
    }

    bool operator==(const Kernel &) const = default;
};

struct KernelBytes
{
    std::uint64_t read = 0;
    std::uint64_t written = 0;
};

// gemm: 2*m*n*k*batch_count; elementwise: elements * flops_per_element;
// communication: 0.
std::uint64_t kernel_flops(const Kernel &k);
// gemm: (m*k + k*n)*batch_count elements read, m*n*batch_count written;
// elementwise: its explicit fields; communication: payload as `read`.
KernelBytes kernel_bytes(const Kernel &k, Precision precision);

Kernel make_gemm(std::string id, Gemm shape, Precision precision, TensorClass a, TensorClass b,
                 TensorClass c);
Kernel make_elementwise(std::string id, Elementwise e, TensorClass input, TensorClass output);
Kernel make_collective(std::string id, CollectiveOp op, std::uint64_t payload, int group_size);
Kernel make_p2p(std::string id, std::uint64_t payload);
// Optimizer step over `params` parameters.
Kernel make_weight_update(std::uint64_t params, const OptimizerModel &opt, std::string id);

// Rebuilds gemm operand byte counts after a shape change, keeping classes and hints.
void refresh_gemm_operands(Kernel &k, Precision precision);

struct GraphTotals
{
    double flops = 0;
    double useful_flops = 0;
    double bytes_read = 0;
    double bytes_written = 0;

    bool operator==(const GraphTotals &) const = default;
};

struct GraphMetadata
{
    Phase phase = Phase::training;
    std::string model;
    Precision precision = Precision::bf16;
    std::uint64_t batch = 0;
    std::uint64_t seq_len = 0;
    std::uint64_t gen_tokens = 0;
    GraphTotals totals;

    bool operator==(const GraphMetadata &) const = default;
};

struct TaskGraph
{
    std::vector<Kernel> kernels;
    GraphMetadata metadata;

    // Appends a kernel depending on the previously appended one.
    std::uint32_t chain(Kernel k);
    std::uint32_t append(Kernel k);
    void recompute_totals();

    WideCount exact_useful_flops() const;
    WideCount exact_flops() const;

    bool operator==(const TaskGraph &) const = default;
};

// Acyclicity, dependency range, gemm flop identity, operand/byte agreement,
// metadata totals.
Violations validate_graph(const TaskGraph &g);
bool is_acyclic(const TaskGraph &g);

// Forward kernels per layer; backward adds two equal-flop gradient gemms per
// forward gemm; one optimizer elementwise kernel covers every parameter.
TaskGraph build_training_graph(const ModelSpec &model, const WorkloadSpec &wl);
// Prefill over seq_len tokens, then gen_tokens serialized decode steps.
TaskGraph build_inference_graph(const ModelSpec &model, const WorkloadSpec &wl);
TaskGraph build_graph(const ModelSpec &model, const WorkloadSpec &wl);

std::string_view to_string(Phase p);
std::string_view to_string(KernelRole r);
std::string_view to_string(Pass p);
std::string_view to_string(TensorClass t);

json to_json(const ModelSpec &model);
ModelSpec model_from_json(const json &doc, const std::string &path = "model");
json to_json(const WorkloadSpec &wl);
WorkloadSpec workload_from_json(const json &doc, const std::string &path = "workload");
json to_json(const TaskGraph &g);
TaskGraph graph_from_json(const json &doc);

}  // namespace llmperf::workload
