// SPDX-FileCopyrightText: © 2026 The llmperf Authors
//
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "llmperf/engine.hpp"
#include "llmperf/scenario.hpp"

namespace llmperf::report
{

using Row = std::vector<std::string>;

// "%.5e": six significant digits.
std::string format_number(double value);

// Scenario parameter columns, in order.
const std::vector<std::string> &parameter_columns();
// Metric columns, in order; also the valid names for sweep `outputs`.
const std::vector<std::string> &metric_columns();
bool is_metric(const std::string &name);

double metric_value(const engine::PerfReport &r, const std::string &metric);

Row parameter_values(const scenario::Scenario &s);
Row metric_values(const engine::PerfReport &r, const std::vector<std::string> &metrics);

std::vector<std::string> csv_header(const std::vector<std::string> &metrics);
Row csv_row(const scenario::Scenario &s, const engine::PerfReport &r, const std::vector<std::string> &metrics);

// RFC 4180 quoting where needed, "\n" line ends.
std::string to_csv(const std::vector<std::string> &header, const std::vector<Row> &rows);

// Scenario, report (optionally with per-kernel detail) and CSV row fields.
json report_document(const scenario::Scenario &s, const engine::PerfReport &r, bool include_kernels);

}  // namespace llmperf::report
