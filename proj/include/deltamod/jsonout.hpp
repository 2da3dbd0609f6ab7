#pragma once

#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace deltamod {

// Shortest fixed format that round-trips IEEE doubles: 17 significant digits.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Minimal JSON document builder with canonical output: object keys are
// emitted in sorted order (std::map), no insignificant whitespace, and all
// doubles printed via format_double, so equal documents are equal bytes.
class JsonValue {
public:
    using Array = std::vector<JsonValue>;
    using Object = std::map<std::string, JsonValue>;

    JsonValue() : value_(nullptr) {}
    JsonValue(std::nullptr_t) : value_(nullptr) {}
    JsonValue(bool v) : value_(v) {}
    JsonValue(int v) : value_(static_cast<long long>(v)) {}
    JsonValue(long v) : value_(static_cast<long long>(v)) {}
    JsonValue(long long v) : value_(v) {}
    JsonValue(unsigned v) : value_(static_cast<std::uint64_t>(v)) {}
    JsonValue(unsigned long v) : value_(static_cast<std::uint64_t>(v)) {}
    JsonValue(unsigned long long v) : value_(static_cast<std::uint64_t>(v)) {}
    JsonValue(double v) : value_(v) {}
    JsonValue(const char* v) : value_(std::string(v)) {}
    JsonValue(std::string v) : value_(std::move(v)) {}
    JsonValue(Array v) : value_(std::move(v)) {}
    JsonValue(Object v) : value_(std::move(v)) {}

    std::string dump() const {
        std::string out;
        write(out);
        return out;
    }

private:
    void write(std::string& out) const {
        switch (value_.index()) {
            case 0:
                out += "null";
                break;
            case 1:
                out += std::get<bool>(value_) ? "true" : "false";
                break;
            case 2:
                out += std::to_string(std::get<long long>(value_));
                break;
            case 3:
                out += std::to_string(std::get<std::uint64_t>(value_));
                break;
            case 4:
                out += format_double(std::get<double>(value_));
                break;
            case 5:
                write_string(out, std::get<std::string>(value_));
                break;
            case 6: {
                out += '[';
                const Array& arr = std::get<Array>(value_);
                for (std::size_t i = 0; i < arr.size(); ++i) {
                    if (i) out += ',';
                    arr[i].write(out);
                }
                out += ']';
                break;
            }
            default: {
                out += '{';
                const Object& obj = std::get<Object>(value_);
                bool first = true;
                for (const auto& [key, val] : obj) {
                    if (!first) out += ',';
                    first = false;
                    write_string(out, key);
                    out += ':';
                    val.write(out);
                }
                out += '}';
                break;
            }
        }
    }

    static void write_string(std::string& out, const std::string& s) {
        out += '"';
        for (char c : s) {
            switch (c) {
                case '"': out += "\\\""; break;
                case '\\': out += "\\\\"; break;
                case '\n': out += "\\n"; break;
                case '\t': out += "\\t"; break;
                case '\r': out += "\\r"; break;
                default:
                    if (static_cast<unsigned char>(c) < 0x20) {
                        char buf[8];
                        std::snprintf(buf, sizeof buf, "\\u%04x", c);
                        out += buf;
                    } else {
                        out += c;
                    }
            }
        }
        out += '"';
    }

    std::variant<std::nullptr_t, bool, long long, std::uint64_t, double, std::string, Array,
                 Object>
        value_;
};

}  // namespace deltamod
