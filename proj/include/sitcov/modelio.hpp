#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sitcov/model.hpp"
#include "sitcov/pods.hpp"

namespace sitcov {

class SyntaxError : public Error {
public:
    SyntaxError(std::size_t line, std::size_t column, const std::string& detail)
        : Error("syntax error at line " + std::to_string(line) + ", column " +
                std::to_string(column) + ": " + detail),
          line_(line),
          column_(column) {}
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class SchemaError : public Error {
public:
    SchemaError(std::string path, std::string reason)
        : Error("schema error at " + path + ": " + reason),
          path_(std::move(path)),
          reason_(std::move(reason)) {}
    const std::string& path() const { return path_; }
    const std::string& reason() const { return reason_; }

private:
    std::string path_;
    std::string reason_;
};

class ValidationFailedError : public Error {
public:
    explicit ValidationFailedError(std::vector<ValidationIssue> issues)
        : Error("model fails validation with " + std::to_string(issues.size()) + " issue(s)"),
          issues_(std::move(issues)) {}
    const std::vector<ValidationIssue>& issues() const { return issues_; }

private:
    std::vector<ValidationIssue> issues_;
};

class DuplicateRequirementIdError : public Error {
public:
    explicit DuplicateRequirementIdError(std::string_view id)
        : Error("duplicate requirement id \"" + std::string(id) + "\""), id_(id) {}
    const std::string& id() const { return id_; }

private:
    std::string id_;
};

/// Parses a model document (UTF-8 JSON). The result always passes validate;
/// structurally broken documents raise SyntaxError or SchemaError, invariant
/// violations raise ValidationFailedError carrying the issue list.
NoiseFactorModel parse_model(std::string_view bytes);

/// Canonical serialization: keys in schema order, arrays in model order,
/// 2-space indentation, LF line endings, trailing newline. Byte-deterministic;
/// parse_model(serialize_model(m)) == m for every valid model.
std::string serialize_model(const NoiseFactorModel& model);

/// Parses a requirements document. POD selectors stay symbolic ("all",
/// ranges) until bound against a grid.
std::vector<RequirementSpec> parse_requirements(std::string_view bytes);

std::string serialize_requirements(std::span<const RequirementSpec> requirements);

}  // namespace sitcov
