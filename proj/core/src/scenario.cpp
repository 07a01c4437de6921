// SPDX-FileCopyrightText: © 2026 The llmperf Authors
//
// SPDX-License-Identifier: Apache-2.0
#include "llmperf/scenario.hpp"

namespace llmperf::scenario
{

namespace
{

const std::vector<std::string> kReferenceKeys = {"system",  "model",         "workload",
                                                 "mapping", "memory_access", "placement"};

json resolve_reference(const std::string &key, const json &ref, const std::filesystem::path &base_dir)
{
    if (ref.is_object())
        return ref;
    if (!ref.is_string())
        throw ParseError(key + ": expected a preset name, a file path or an object");
    const auto text = ref.get<std::string>();
    if (key == "system" && hw::is_system_preset(text))
        return hw::to_json(hw::system_preset(text));
    if (key == "model" && workload::is_model_preset(text))
        return workload::to_json(workload::model_preset(text));
    std::filesystem::path path(text);
    if (path.is_relative())
        path = base_dir / path;
    if (!std::filesystem::exists(path))
    {
        if (key == "system")
            throw ValidationError(key, "'" + text + "' is neither a system preset nor a file");
        if (key == "model")
            throw ValidationError(key, "'" + text + "' is neither a model preset nor a file");
        throw ValidationError(key, "file not found: " + path.string());
    }
    return load_json_file(path.string());
}

// Round-trips each section through its parser so every defaulted field is
// present and addressable by dotted overrides.
json canonical(const json &resolved)
{
    json doc = resolved;
    doc["system"] = hw::to_json(hw::system_from_json(resolved.at("system")));
    doc["model"] = workload::to_json(workload::model_from_json(resolved.at("model")));
    doc["workload"] = workload::to_json(workload::workload_from_json(resolved.at("workload")));
    const json &m = resolved.at("mapping");
    json mapping = mapping::to_json(mapping::mapping_from_json(m));
    if (!m.contains("microbatches") || m.at("microbatches").is_null())
        mapping["microbatches"] = nullptr;
    doc["mapping"] = mapping;
    doc["memory_access"] = engine::to_json(engine::memory_access_from_json(resolved.at("memory_access")));
    doc["placement"] = engine::to_json(engine::placement_from_json(resolved.at("placement")));
    return doc;
}

void prefix_violations(Violations &out, const Violations &in, const std::string &section)
{
    for (const auto &v : in)
    {
        bool qualified = v.field.rfind(section + ".", 0) == 0 || v.field == section;
        out.push_back({qualified ? v.field : section + "." + v.field, v.rule});
    }
}

}  // namespace

Source source_from_json(json doc, std::filesystem::path base_dir)
{
    if (!doc.is_object())
        throw ParseError("scenario: expected an object");
    return {std::move(doc), std::move(base_dir)};
}

Source load_source(const std::string &path)
{
    std::filesystem::path p(path);
    return source_from_json(load_json_file(path), p.has_parent_path() ? p.parent_path() : ".");
}

void set_reference(Source &src, const std::string &key, json ref) { src.doc[key] = std::move(ref); }

Override parse_assignment(const std::string &text)
{
    auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ParseError("--set expects key=value, got '" + text + "'");
    std::string key = text.substr(0, eq);
    std::string raw = text.substr(eq + 1);
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded())
        value = raw;
    return {key, value};
}

json resolve_document(const Source &src, const std::vector<Override> &extra)
{
    FieldReader r(src.doc, "scenario");
    json resolved = json::object();
    resolved["name"] = r.value_or<std::string>("name", "scenario");
    r.optional<std::string>("description");
    for (const auto &key : kReferenceKeys)
    {
        const bool required = key == "system" || key == "model" || key == "workload";
        if (!r.has(key) || src.doc.at(key).is_null())
        {
            if (required)
                throw ParseError("scenario." + key + ": missing required field");
            r.optional<json>(key);
            resolved[key] = json::object();
            continue;
        }
        resolved[key] = resolve_reference(key, r.at(key), src.base_dir);
    }
    resolved["lift_pool_caps"] = r.value_or<bool>("lift_pool_caps", false);
    json file_overrides = r.value_or<json>("overrides", json::object());
    r.finish();
    if (!file_overrides.is_object())
        throw ParseError("scenario.overrides: expected an object of dotted paths");

    json doc = canonical(resolved);
    json applied = json::object();
    auto apply = [&](const std::string &key, const json &value) {
        set_dotted(doc, key, value);
        applied[key] = value;
    };
    for (const auto &[key, value] : file_overrides.items())
        apply(key, value);
    for (const auto &[key, value] : extra)
        apply(key, value);
    doc["overrides"] = applied;
    return doc;
}

namespace
{

Scenario assemble(const json &doc)
{
    Scenario s;
    s.name = doc.at("name").get<std::string>();
    s.system = hw::system_from_json(doc.at("system"));
    s.model = workload::model_from_json(doc.at("model"));
    s.workload = workload::workload_from_json(doc.at("workload"));
    const json &mapping_doc = doc.at("mapping");
    s.mapping = mapping::mapping_from_json(mapping_doc);
    if (mapping_doc.at("microbatches").is_null())
        s.mapping.microbatches = s.workload.phase == workload::Phase::training
                                     ? static_cast<int>(s.workload.microbatches)
                                     : 1;
    s.memory_access = engine::memory_access_from_json(doc.at("memory_access"));
    s.placement = engine::placement_from_json(doc.at("placement"));
    if (!doc.at("lift_pool_caps").is_boolean())
        throw ParseError("scenario.lift_pool_caps: expected a boolean");
    s.lift_pool_caps = doc.at("lift_pool_caps").get<bool>();
    if (s.lift_pool_caps)
        hw::lift_pool_caps(s.system);
    for (const auto &[key, value] : doc.at("overrides").items())
        s.overrides[key] = value;
    return s;
}

}  // namespace

Scenario build(const Source &src, const std::vector<Override> &extra)
{
    Scenario s = assemble(resolve_document(src, extra));
    throw_if_invalid(validate(s));
    return s;
}

Violations check(const Source &src, const std::vector<Override> &extra)
{
    return validate(assemble(resolve_document(src, extra)));
}

Violations validate(const Scenario &s)
{
    Violations v;
    prefix_violations(v, hw::validate_system(s.system), "system");
    prefix_violations(v, workload::validate_model(s.model), "model");
    prefix_violations(v, workload::validate_workload(s.workload), "workload");
    if (s.workload.phase == workload::Phase::training &&
        static_cast<std::uint64_t>(s.mapping.microbatches) != s.workload.microbatches)
        v.push_back({"mapping.microbatches", "mapping.microbatches must equal workload.microbatches"});
    if (v.empty())
        for (const auto &m : mapping::validate_mapping(s.mapping, s.model, s.workload.batch, s.workload.phase,
                                                       s.system))
            v.push_back(m);
    prefix_violations(v, engine::validate_memory_access(s.memory_access), "memory_access");
    if (s.placement.kv_level && !s.system.device.find_level(*s.placement.kv_level))
        v.push_back({"placement.kv_level", "kv_level must name a device memory level"});
    return v;
}

json to_json(const Scenario &s)
{
    json overrides = json::object();
    for (const auto &[key, value] : s.overrides)
        overrides[key] = value;
    return {{"name", s.name},
            {"system", hw::to_json(s.system)},
            {"model", workload::to_json(s.model)},
            {"workload", workload::to_json(s.workload)},
            {"mapping", mapping::to_json(s.mapping)},
            {"memory_access", engine::to_json(s.memory_access)},
            {"placement", engine::to_json(s.placement)},
            {"lift_pool_caps", s.lift_pool_caps},
            {"overrides", overrides}};
}

std::shared_ptr<const mapping::MappedGraph> Evaluator::mapped_graph(const Scenario &s)
{
    const std::string key = json{{"model", workload::to_json(s.model)},
                                 {"workload", workload::to_json(s.workload)},
                                 {"mapping", mapping::to_json(s.mapping)}}
                                .dump();
    if (auto it = cache_.find(key); it != cache_.end())
        return it->second;
    workload::TaskGraph g = workload::build_graph(s.model, s.workload);
    auto mg = std::make_shared<mapping::MappedGraph>(mapping::apply_parallelism(g, s.mapping, s.model));
    mg->optimizer_state_bytes_per_param = s.workload.optimizer.state_bytes_per_param;
    cache_.emplace(key, mg);
    return mg;
}

engine::PerfReport Evaluator::evaluate(const Scenario &s)
{
    auto mg = mapped_graph(s);
    return engine::evaluate(*mg, s.system, s.memory_access, s.placement);
}

}  // namespace llmperf::scenario
