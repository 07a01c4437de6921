// SPDX-FileCopyrightText: © 2026 The llmperf Authors
//
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace llmperf
{

class Error : public std::runtime_error
{
   public:
    using std::runtime_error::runtime_error;
};

// Malformed input: bad JSON syntax, wrong types, missing or unknown fields.
class ParseError : public Error
{
   public:
    using Error::Error;
};

// Well-formed input that breaks a domain invariant.
class ValidationError : public Error
{
   public:
    ValidationError(std::string field, const std::string &what) :
        Error(field.empty() ? what : field + ": " + what), field_(std::move(field))
    {
    }

    const std::string &field() const noexcept { return field_; }

   private:
    std::string field_;
};

// One broken invariant. Violations are data; callers decide whether to throw.
struct Violation
{
    std::string field;
    std::string rule;

    std::string message() const { return rule; }
    bool operator==(const Violation &) const = default;
};

using Violations = std::vector<Violation>;

// Throws a ValidationError for the first violation, if any.
inline void throw_if_invalid(const Violations &violations)
{
    if (!violations.empty())
        throw ValidationError(violations.front().field, violations.front().rule);
}

}  // namespace llmperf
