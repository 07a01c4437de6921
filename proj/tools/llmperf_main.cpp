// SPDX-FileCopyrightText: © 2026 The llmperf Authors
//
// SPDX-License-Identifier: Apache-2.0
#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "llmperf/report_io.hpp"
#include "llmperf/scenario.hpp"
#include "llmperf/studies.hpp"

namespace fs = std::filesystem;
using namespace llmperf;

namespace
{

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;

struct Common
{
    std::string system, model, workload, mapping;
    std::vector<std::string> sets;
    std::string out;
    std::string format;
};

void add_common(CLI::App *cmd, Common &c)
{
    cmd->add_option("--set", c.sets, "Dotted override key=value (repeatable)");
    cmd->add_option("--out", c.out, "Directory for output files");
    cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
}

void add_references(CLI::App *cmd, Common &c)
{
    cmd->add_option("--system", c.system, "System preset name or JSON file");
    cmd->add_option("--model", c.model, "Model preset name or JSON file");
    cmd->add_option("--workload", c.workload, "Workload JSON file");
    cmd->add_option("--mapping", c.mapping, "Mapping JSON file");
}

std::vector<scenario::Override> overrides(const Common &c)
{
    std::vector<scenario::Override> out;
    for (const auto &s : c.sets)
        out.push_back(scenario::parse_assignment(s));
    return out;
}

// Flag values that name files are taken relative to the working directory.
json reference(const std::string &value, bool may_be_preset)
{
    if (may_be_preset && !fs::exists(value))
        return value;
    return fs::absolute(value).string();
}

void apply_references(scenario::Source &src, const Common &c)
{
    if (!c.system.empty())
        scenario::set_reference(src, "system", reference(c.system, true));
    if (!c.model.empty())
        scenario::set_reference(src, "model", reference(c.model, true));
    if (!c.workload.empty())
        scenario::set_reference(src, "workload", reference(c.workload, false));
    if (!c.mapping.empty())
        scenario::set_reference(src, "mapping", reference(c.mapping, false));
}

void write_file(const fs::path &path, const std::string &text)
{
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write " + path.string());
    out << text;
    std::cerr << "wrote " << path.string() << "\n";
}

int cmd_run(const std::string &file, const Common &c, bool no_kernels)
{
    scenario::Source src = file.empty() ? scenario::source_from_json(json::object()) : scenario::load_source(file);
    apply_references(src, c);
    scenario::Scenario s = scenario::build(src, overrides(c));
    scenario::Evaluator evaluator;
    engine::PerfReport r = evaluator.evaluate(s);

    const auto &metrics = report::metric_columns();
    const std::string csv = report::to_csv(report::csv_header(metrics), {report::csv_row(s, r, metrics)});
    const std::string doc = report::report_document(s, r, !no_kernels).dump(2) + "\n";
    if (!c.out.empty())
    {
        write_file(fs::path(c.out) / (s.name + ".json"), doc);
        write_file(fs::path(c.out) / (s.name + ".csv"), csv);
        return kExitOk;
    }
    std::cout << (c.format == "csv" ? csv : doc);
    return kExitOk;
}

int cmd_sweep(const std::string &plan_path, const Common &c)
{
    studies::SweepPlan plan = studies::load_sweep_plan(plan_path);
    apply_references(plan.base, c);
    auto points = studies::run_sweep(plan, overrides(c));
    std::string text;
    if (c.format == "json")
    {
        json rows = json::array();
        const auto metrics = studies::sweep_metrics(plan);
        const auto header = report::csv_header(metrics);
        for (const auto &p : points)
        {
            auto values = report::csv_row(p.scenario, p.report, metrics);
            json row = json::object();
            for (std::size_t i = 0; i < header.size(); ++i)
                row[header[i]] = values[i];
            rows.push_back(row);
        }
        text = json{{"name", plan.name}, {"axis", plan.axis}, {"rows", rows}}.dump(2) + "\n";
    }
    else
    {
        text = studies::sweep_csv(plan, points);
    }
    if (!c.out.empty())
    {
        fs::path name = plan.output_file;
        if (c.format == "json")
            name.replace_extension(".json");
        write_file(fs::path(c.out) / name, text);
        return kExitOk;
    }
    std::cout << text;
    return kExitOk;
}

json rows_to_json(const std::string &csv)
{
    // Re-key the CSV rows so both formats carry identical numbers.
    json rows = json::array();
    std::istringstream in(csv);
    std::string line;
    std::vector<std::string> header;
    while (std::getline(in, line))
    {
        std::vector<std::string> fields;
        std::string field;
        bool quoted = false;
        for (char ch : line)
        {
            if (ch == '"')
                quoted = !quoted;
            else if (ch == ',' && !quoted)
            {
                fields.push_back(field);
                field.clear();
            }
            else
                field += ch;
        }
        fields.push_back(field);
        if (header.empty())
        {
            header = fields;
            continue;
        }
        json row = json::object();
        for (std::size_t i = 0; i < header.size() && i < fields.size(); ++i)
            row[header[i]] = fields[i];
        rows.push_back(row);
    }
    return rows;
}

int emit_table(const std::string &name, const std::string &output_file, const std::string &csv, const Common &c)
{
    std::string text = c.format == "json" ? json{{"name", name}, {"rows", rows_to_json(csv)}}.dump(2) + "\n" : csv;
    if (!c.out.empty())
    {
        fs::path file = output_file;
        if (c.format == "json")
            file.replace_extension(".json");
        write_file(fs::path(c.out) / file, text);
        return kExitOk;
    }
    std::cout << text;
    return kExitOk;
}

int cmd_compare(const std::vector<std::string> &files, const Common &c)
{
    studies::ComparePlan plan;
    if (files.size() == 1)
    {
        plan = studies::load_compare_plan(files[0]);
    }
    else
    {
        plan.name = "compare";
        plan.a = scenario::load_source(files[0]);
        plan.b = scenario::load_source(files[1]);
        plan.output_file = "compare.csv";
    }
    if (!c.model.empty())
        plan.models = {c.model};
    auto rows = studies::run_compare(plan, overrides(c));
    return emit_table(plan.name, plan.output_file, studies::compare_csv(rows), c);
}

int cmd_kv_fit(const std::string &plan_path, const Common &c)
{
    studies::KvFitPlan plan = studies::load_kv_fit_plan(plan_path);
    auto rows = studies::run_kv_fit(plan, overrides(c));
    return emit_table(plan.name, plan.output_file, studies::kv_fit_csv(rows), c);
}

int cmd_dump_preset(const std::string &name)
{
    if (hw::is_system_preset(name))
    {
        std::cout << hw::to_json(hw::system_preset(name)).dump(2) << "\n";
        return kExitOk;
    }
    if (workload::is_model_preset(name))
    {
        std::cout << workload::to_json(workload::model_preset(name)).dump(2) << "\n";
        return kExitOk;
    }
    std::string options;
    for (const auto &n : hw::system_preset_names())
        options += (options.empty() ? "" : ", ") + n;
    for (const auto &n : workload::model_preset_names())
        options += ", " + n;
    throw ValidationError("preset", "unknown preset '" + name + "' (available: " + options + ")");
}

void print_violations(const Violations &v)
{
    for (const auto &x : v)
        std::cout << x.field << ": " << x.rule << "\n";
}

void prefix_all(Violations &v, const std::string &prefix)
{
    for (auto &x : v)
        x.field = prefix + x.field;
}

int cmd_validate(const std::string &file, const Common &c)
{
    json doc = load_json_file(file);
    const fs::path dir = fs::path(file).has_parent_path() ? fs::path(file).parent_path() : fs::path(".");
    Violations v;
    if (doc.is_object() && doc.contains("axis") && doc.contains("base"))
    {
        auto plan = studies::sweep_plan_from_json(doc, dir);
        v = scenario::check(plan.base, overrides(c));
    }
    else if (doc.is_object() && doc.contains("a") && doc.contains("b"))
    {
        auto plan = studies::compare_plan_from_json(doc, dir);
        v = scenario::check(plan.a, overrides(c));
        prefix_all(v, "a.");
        Violations vb = scenario::check(plan.b, overrides(c));
        prefix_all(vb, "b.");
        v.insert(v.end(), vb.begin(), vb.end());
    }
    else if (doc.is_object() && doc.contains("cases"))
    {
        auto plan = studies::kv_fit_plan_from_json(doc, dir);
        v = scenario::check(plan.base, overrides(c));
    }
    else if (doc.is_object() && doc.contains("device") && doc.contains("main_memory"))
    {
        v = hw::validate_system(hw::system_from_json(doc));
    }
    else if (doc.is_object() && doc.contains("num_layers"))
    {
        v = workload::validate_model(workload::model_from_json(doc));
    }
    else
    {
        scenario::Source src = scenario::source_from_json(doc, dir);
        apply_references(src, c);
        v = scenario::check(src, overrides(c));
    }
    if (!v.empty())
    {
        print_violations(v);
        return kExitValidation;
    }
    std::cout << "ok\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Analytical performance model for LLM training and inference", "llmperf"};
    app.require_subcommand(1);

    Common common;
    std::string file;
    std::vector<std::string> files;
    std::string preset;
    bool no_kernels = false;

    auto *run = app.add_subcommand("run", "Evaluate one scenario");
    run->add_option("scenario", file, "Scenario JSON file");
    add_references(run, common);
    add_common(run, common);
    run->add_flag("--no-kernels", no_kernels, "Omit per-kernel detail from the JSON report");

    auto *sweep = app.add_subcommand("sweep", "Evaluate a scenario over the values of one axis");
    sweep->add_option("plan", file, "Sweep plan JSON file")->required();
    add_references(sweep, common);
    add_common(sweep, common);

    auto *compare = app.add_subcommand("compare", "Compare two systems on the same workload");
    compare->add_option("inputs", files, "Compare plan, or scenario A and scenario B")->required()->expected(1, 2);
    compare->add_option("--model", common.model, "Model preset to compare on");
    add_common(compare, common);

    auto *kv_fit = app.add_subcommand("kv-fit", "Check KV-cache fit in an on-device level");
    kv_fit->add_option("plan", file, "KV-fit plan JSON file")->required();
    add_common(kv_fit, common);

    auto *dump = app.add_subcommand("dump-preset", "Print a system or model preset as JSON");
    dump->add_option("name", preset, "Preset name")->required();

    auto *validate = app.add_subcommand("validate", "Validate a scenario, plan, system or model file");
    validate->add_option("file", file, "JSON file")->required();
    add_references(validate, common);
    validate->add_option("--set", common.sets, "Dotted override key=value (repeatable)");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitParse;
    }

    if (common.format.empty())
        common.format = *run ? "json" : "csv";

    try
    {
        if (*run)
            return cmd_run(file, common, no_kernels);
        if (*sweep)
            return cmd_sweep(file, common);
        if (*compare)
            return cmd_compare(files, common);
        if (*kv_fit)
            return cmd_kv_fit(file, common);
        if (*dump)
            return cmd_dump_preset(preset);
        if (*validate)
            return cmd_validate(file, common);
    }
    catch (const ParseError &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    }
    catch (const ValidationError &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
