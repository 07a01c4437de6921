// SPDX-FileCopyrightText: © 2026 The llmperf Authors
//
// SPDX-License-Identifier: Apache-2.0
#include "llmperf/json_fields.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include "llmperf/precision.hpp"

namespace llmperf
{

namespace
{

constexpr std::array<std::pair<Precision, std::string_view>, 4> kPrecisionNames{{
    {Precision::fp8, "fp8"},
    {Precision::bf16, "bf16"},
    {Precision::fp16, "fp16"},
    {Precision::fp32, "fp32"},
}};

}  // namespace

std::string_view to_string(Precision p)
{
    for (const auto &[value, name] : kPrecisionNames)
        if (value == p)
            return name;
    return "unknown";
}

Precision parse_precision(std::string_view name)
{
    for (const auto &[value, text] : kPrecisionNames)
        if (text == name)
            return value;
    throw ParseError("unknown precision '" + std::string(name) + "' (expected fp8, bf16, fp16, fp32)");
}

FieldReader::FieldReader(const json &object, std::string path) : object_(object), path_(std::move(path))
{
    if (!object_.is_object())
        throw ParseError(path_ + ": expected an object, got " + object_.type_name());
}

const json &FieldReader::at(const std::string &key)
{
    seen_.insert(key);
    auto it = object_.find(key);
    if (it == object_.end())
        throw ParseError(child_path(key) + ": missing required field");
    return *it;
}

std::string FieldReader::child_path(const std::string &key) const
{
    return path_.empty() ? key : path_ + "." + key;
}

void FieldReader::finish() const
{
    for (const auto &[key, value] : object_.items())
        if (!seen_.contains(key))
            throw ParseError(child_path(key) + ": unknown field");
}

json parse_json_text(const std::string &text, const std::string &source)
{
    try
    {
        return json::parse(text);
    }
    catch (const json::parse_error &e)
    {
        // e.byte is 1-based and points one past the offending character.
        std::size_t offset = e.byte == 0 ? 0 : e.byte - 1;
        offset = std::min(offset, text.size());
        std::size_t line = 1, column = 1;
        for (std::size_t i = 0; i < offset; ++i)
        {
            if (text[i] == '\n')
            {
                ++line;
                column = 1;
            }
            else
            {
                ++column;
            }
        }
        std::ostringstream msg;
        msg << source << ":" << line << ":" << column << ": malformed JSON";
        throw ParseError(msg.str());
    }
}

json load_json_file(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError(path + ": cannot open file");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_json_text(buffer.str(), path);
}

void merge_existing(json &target, const json &patch, const std::string &path)
{
    if (!patch.is_object() || !target.is_object())
    {
        target = patch;
        return;
    }
    for (const auto &[key, value] : patch.items())
    {
        std::string child = path.empty() ? key : path + "." + key;
        auto it = target.find(key);
        if (it == target.end())
            throw ValidationError(child, "override names a field that does not exist");
        if (value.is_object() && it->is_object())
            merge_existing(*it, value, child);
        else
            *it = value;
    }
}

void set_dotted(json &doc, const std::string &dotted, const json &value)
{
    json *node = &doc;
    std::string walked;
    std::size_t start = 0;
    while (start <= dotted.size())
    {
        std::size_t end = dotted.find('.', start);
        if (end == std::string::npos)
            end = dotted.size();
        std::string segment = dotted.substr(start, end - start);
        walked = walked.empty() ? segment : walked + "." + segment;
        if (segment.empty())
            throw ValidationError(dotted, "empty path segment");

        json *next = nullptr;
        if (node->is_object())
        {
            auto it = node->find(segment);
            if (it != node->end())
                next = &*it;
        }
        else if (node->is_array())
        {
            bool numeric = std::all_of(segment.begin(), segment.end(), ::isdigit);
            if (numeric)
            {
                std::size_t index = std::stoul(segment);
                if (index < node->size())
                    next = &(*node)[index];
            }
            else
            {
                for (auto &element : *node)
                    if (element.is_object() && element.value("name", "") == segment)
                        next = &element;
            }
        }
        if (next == nullptr)
            throw ValidationError(walked, "override names a field that does not exist");
        node = next;
        start = end + 1;
    }
    *node = value;
}

}  // namespace llmperf
