// SPDX-FileCopyrightText: © 2026 The llmperf Authors
//
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <set>
#include <string>

#include "llmperf/error.hpp"

namespace llmperf
{

using json = nlohmann::json;

// Strict reader over one JSON object. Every accessor records the key it
// consumed; finish() rejects keys nobody asked for, so typos in input files
// surface as errors naming the offending path.
class FieldReader
{
   public:
    FieldReader(const json &object, std::string path);

    template <typename T>
    T required(const std::string &key)
    {
        return convert<T>(at(key), key);
    }

    template <typename T>
    std::optional<T> optional(const std::string &key)
    {
        seen_.insert(key);
        auto it = object_.find(key);
        if (it == object_.end() || it->is_null())
            return std::nullopt;
        return convert<T>(*it, key);
    }

    template <typename T>
    T value_or(const std::string &key, T fallback)
    {
        auto v = optional<T>(key);
        return v ? *v : fallback;
    }

    const json &at(const std::string &key);
    bool has(const std::string &key) const { return object_.contains(key); }
    std::string child_path(const std::string &key) const;

    // Throws ParseError naming the first unconsumed key.
    void finish() const;

   private:
    template <typename T>
    T convert(const json &value, const std::string &key) const
    {
        try
        {
            return value.get<T>();
        }
        catch (const json::exception &)
        {
            throw ParseError(child_path(key) + ": unexpected type " + value.type_name());
        }
    }

    const json &object_;
    std::string path_;
    std::set<std::string> seen_;
};

// Parses text into JSON; syntax errors become ParseError with line/column.
json parse_json_text(const std::string &text, const std::string &source);
json load_json_file(const std::string &path);

// Recursively applies `patch` onto `target`. Every key in the patch must
// already exist in the target; arrays and scalars are replaced wholesale.
void merge_existing(json &target, const json &patch, const std::string &path = "");

// Sets a dotted path ("system.device.memory_levels.L2.capacity") on `doc`.
// Array segments match by integer index or by an element's "name" field.
void set_dotted(json &doc, const std::string &dotted, const json &value);

}  // namespace llmperf
