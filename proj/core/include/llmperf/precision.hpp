// SPDX-FileCopyrightText: © 2026 The llmperf Authors
//
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace llmperf
{

enum class Precision
{
    fp8,
    bf16,
    fp16,
    fp32,
};

constexpr std::uint64_t bytes_per_element(Precision p)
{
    switch (p)
    {
        case Precision::fp8: return 1;
        case Precision::bf16: return 2;
        case Precision::fp16: return 2;
        case Precision::fp32: return 4;
    }
    return 0;
}

std::string_view to_string(Precision p);
// Throws ParseError for unknown names.
Precision parse_precision(std::string_view name);

}  // namespace llmperf
