#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

#include "tna/format.hpp"

namespace tna::internal {

// Hand-rolled canonical writer: callers emit keys in sorted order, floats are
// formatted with a fixed number of significant digits, no locale dependence.
// Exists because exports must be byte-identical across runs and platforms.
class JsonWriter {
public:
    explicit JsonWriter(int float_digits) : digits_(float_digits) {}

    std::string str() && { return std::move(out_); }

    void raw(std::string_view s) { out_ += s; }
    void key(std::string_view name) {
        out_ += '"';
        out_ += name;
        out_ += "\":";
    }
    void string(std::string_view s) {
        out_ += '"';
        for (char c : s) {
            switch (c) {
                case '"': out_ += "\\\""; break;
                case '\\': out_ += "\\\\"; break;
                case '\n': out_ += "\\n"; break;
                case '\r': out_ += "\\r"; break;
                case '\t': out_ += "\\t"; break;
                default:
                    if (static_cast<unsigned char>(c) < 0x20) {
                        char buf[8];
                        std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                        out_ += buf;
                    } else {
                        out_ += c;
                    }
            }
        }
        out_ += '"';
    }
    void number(double v) { out_ += format_double(v, digits_); }
    void integer(std::int64_t v) { out_ += std::to_string(v); }
    void boolean(bool b) { out_ += b ? "true" : "false"; }
    void null() { out_ += "null"; }

private:
    std::string out_;
    int digits_;
};

}  // namespace tna::internal
