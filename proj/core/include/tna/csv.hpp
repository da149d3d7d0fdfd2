#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tna::csv {

struct Row {
    std::vector<std::string> fields;
    long line = 0;  // 1-based physical line the row started on
};

/// Minimal RFC-4180-style reader: comma separator, optional double-quoted
/// fields with "" escaping, CRLF tolerated. Unquoted fields are trimmed of
/// surrounding whitespace; quoted fields are taken verbatim.
class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    /// Next record, or nullopt at end of input. Blank lines are skipped.
    std::optional<Row> next();

private:
    std::istream& in_;
    long line_ = 0;
};

/// Quotes a field if it contains a comma, quote, or newline.
std::string escape(std::string_view field);

/// Joins pre-escaped or raw fields into one CSV line (no trailing newline).
std::string join(const std::vector<std::string>& fields);

std::string trim(std::string_view s);

}  // namespace tna::csv
