// SPDX-FileCopyrightText: © 2026 The llmperf Authors
//
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <string>
#include <string_view>
#include <utility>

#include "llmperf/error.hpp"
#include "llmperf/workload.hpp"

namespace llmperf::detail
{

template <typename Enum, std::size_t N>
using NameTable = std::array<std::pair<Enum, std::string_view>, N>;

template <typename Enum, std::size_t N>
std::string_view name_of(const NameTable<Enum, N> &table, Enum value)
{
    for (const auto &[v, name] : table)
        if (v == value)
            return name;
    return "unknown";
}

template <typename Enum, std::size_t N>
Enum parse_name(const NameTable<Enum, N> &table, std::string_view text, const std::string &path)
{
    for (const auto &[v, name] : table)
        if (name == text)
            return v;
    std::string options;
    for (const auto &[v, name] : table)
        options += (options.empty() ? "" : ", ") + std::string(name);
    throw ParseError(path + ": unknown value '" + std::string(text) + "' (expected " + options + ")");
}

using namespace llmperf::workload;

inline constexpr NameTable<Phase, 2> kPhaseNames{{{Phase::training, "training"}, {Phase::inference, "inference"}}};

inline constexpr NameTable<KernelRole, 17> kRoleNames{{
    {KernelRole::ln_attn, "ln_attn"},
    {KernelRole::qkv_proj, "qkv_proj"},
    {KernelRole::kv_append, "kv_append"},
    {KernelRole::attn_score, "attn_score"},
    {KernelRole::softmax, "softmax"},
    {KernelRole::attn_context, "attn_context"},
    {KernelRole::out_proj, "out_proj"},
    {KernelRole::residual_attn, "residual_attn"},
    {KernelRole::ln_ffn, "ln_ffn"},
    {KernelRole::ffn_up, "ffn_up"},
    {KernelRole::ffn_down, "ffn_down"},
    {KernelRole::residual_ffn, "residual_ffn"},
    {KernelRole::weight_update, "weight_update"},
    {KernelRole::tp_allreduce, "tp_allreduce"},
    {KernelRole::dp_allreduce, "dp_allreduce"},
    {KernelRole::stage_transfer, "stage_transfer"},
    {KernelRole::custom, "custom"},
}};

inline constexpr NameTable<Pass, 5> kPassNames{{
    {Pass::forward, "forward"},
    {Pass::backward, "backward"},
    {Pass::update, "update"},
    {Pass::prefill, "prefill"},
    {Pass::decode, "decode"},
}};

inline constexpr NameTable<TensorClass, 5> kTensorNames{{
    {TensorClass::activation, "activation"},
    {TensorClass::weight, "weight"},
    {TensorClass::gradient, "gradient"},
    {TensorClass::optimizer_state, "optimizer_state"},
    {TensorClass::kv_cache, "kv_cache"},
}};

inline constexpr NameTable<Access, 2> kAccessNames{{{Access::read, "read"}, {Access::write, "write"}}};

inline constexpr NameTable<ResidencyHint, 2> kHintNames{
    {{ResidencyHint::streamed, "streamed"}, {ResidencyHint::cacheable, "cacheable"}}};

inline constexpr NameTable<GradOf, 3> kGradNames{
    {{GradOf::none, "none"}, {GradOf::input, "input"}, {GradOf::weight, "weight"}}};

inline constexpr NameTable<GemmDim, 5> kDimNames{{
    {GemmDim::none, "none"},
    {GemmDim::m, "m"},
    {GemmDim::n, "n"},
    {GemmDim::k, "k"},
    {GemmDim::batch, "batch"},
}};

inline constexpr NameTable<CollectiveOp, 2> kCollectiveNames{
    {{CollectiveOp::allreduce, "allreduce"}, {CollectiveOp::allgather, "allgather"}}};

}  // namespace llmperf::detail
