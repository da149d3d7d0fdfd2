#pragma once

#include <stdexcept>
#include <string>

namespace tna {

/// Raised when an input file (fixation log, AOI map, stage table, generator
/// spec) is malformed. Carries the 1-based line number and the offending
/// field name when they are known; both show up in what().
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, long line = 0, std::string field = {})
        : std::runtime_error(compose(message, line, field)),
          line_(line),
          field_(std::move(field)) {}

    long line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    static std::string compose(const std::string& message, long line, const std::string& field) {
        std::string out;
        if (line > 0) {
            out += "line " + std::to_string(line);
        }
        if (!field.empty()) {
            out += out.empty() ? "field '" + field + "'" : ", field '" + field + "'";
        }
        if (!out.empty()) {
            out += ": ";
        }
        return out + message;
    }

    long line_ = 0;
    std::string field_;
};

/// Raised for bad run configuration (unknown group key, invalid flag
/// combinations, unreadable paths). Distinct from ParseError so the CLI can
/// map input problems and configuration problems to different exit codes.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace tna
