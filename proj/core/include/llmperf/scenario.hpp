// SPDX-FileCopyrightText: © 2026 The llmperf Authors
//
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "llmperf/engine.hpp"
#include "llmperf/hwspec.hpp"
#include "llmperf/mapping.hpp"
#include "llmperf/workload.hpp"

namespace llmperf::scenario
{

using Override = std::pair<std::string, json>;

// A scenario file before its references are resolved. `system` and `model`
// may be preset names, file paths (relative to `base_dir`) or inline
// objects; workload, mapping, memory_access and placement may be paths or
// inline objects.
struct Source
{
    json doc = json::object();
    std::filesystem::path base_dir = ".";
};

Source load_source(const std::string &path);
Source source_from_json(json doc, std::filesystem::path base_dir = ".");

// Replaces one top-level reference ("system", "model", ...).
void set_reference(Source &src, const std::string &key, json ref);

// Parses a `--set key=value` argument; the value is read as JSON when it
// parses and as a bare string otherwise.
Override parse_assignment(const std::string &text);

struct Scenario
{
    std::string name;
    hw::SystemSpec system;
    workload::ModelSpec model;
    workload::WorkloadSpec workload;
    mapping::MappingSpec mapping;
    engine::MemoryAccessModel memory_access;
    engine::PlacementPolicy placement;
    bool lift_pool_caps = false;
    // Effective overrides, last value per key.
    std::map<std::string, json> overrides;
};

// Fully resolved document: {name, system, model, workload, mapping,
// memory_access, placement, lift_pool_caps} with every override applied.
json resolve_document(const Source &src, const std::vector<Override> &extra = {});

// Resolves, applies the file's overrides followed by `extra`, parses and
// validates. Throws ParseError or ValidationError.
Scenario build(const Source &src, const std::vector<Override> &extra = {});

// Like build, but returns every violation instead of throwing on the first.
// Still throws ParseError for malformed input.
Violations check(const Source &src, const std::vector<Override> &extra = {});

// Every violation across system, model, workload, mapping and access model.
Violations validate(const Scenario &s);

json to_json(const Scenario &s);

// Evaluates scenarios, reusing mapped graphs across scenarios that share
// model, workload and mapping.
class Evaluator
{
   public:
    engine::PerfReport evaluate(const Scenario &s);
    std::shared_ptr<const mapping::MappedGraph> mapped_graph(const Scenario &s);

   private:
    std::map<std::string, std::shared_ptr<const mapping::MappedGraph>> cache_;
};

}  // namespace llmperf::scenario
