#include "tna/csv.hpp"

#include <cctype>

namespace tna::csv {

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::optional<Row> Reader::next() {
    int c = in_.get();
    while (c == '\n' || c == '\r') {
        if (c == '\n') ++line_;
        c = in_.get();
    }
    if (c == std::istream::traits_type::eof()) {
        return std::nullopt;
    }

    Row row;
    row.line = line_ + 1;
    std::string field;
    bool quoted = false;
    bool was_quoted = false;

    auto flush = [&] {
        row.fields.push_back(was_quoted ? field : trim(field));
        field.clear();
        was_quoted = false;
    };

    while (true) {
        if (c == std::istream::traits_type::eof()) {
            flush();
            ++line_;
            break;
        }
        char ch = static_cast<char>(c);
        if (quoted) {
            if (ch == '"') {
                if (in_.peek() == '"') {
                    field.push_back('"');
                    in_.get();
                } else {
                    quoted = false;
                }
            } else {
                if (ch == '\n') ++line_;
                field.push_back(ch);
            }
        } else if (ch == '"' && field.empty() && !was_quoted) {
            quoted = true;
            was_quoted = true;
        } else if (ch == ',') {
            flush();
        } else if (ch == '\n') {
            flush();
            ++line_;
            break;
        } else if (ch != '\r') {
            field.push_back(ch);
        }
        c = in_.get();
    }
    return row;
}

std::string escape(std::string_view field) {
    bool needs = field.find_first_of(",\"\n\r") != std::string_view::npos;
    if (!needs) {
        return std::string(field);
    }
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char ch : field) {
        if (ch == '"') out.push_back('"');
        out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

std::string join(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(',');
        out += fields[i];
    }
    return out;
}

}  // namespace tna::csv
