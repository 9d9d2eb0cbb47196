#ifndef SOJOURN_REPORT_HPP
#define SOJOURN_REPORT_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace sojourn {

/// Order-preserving JSON value for reports. Numbers are emitted with 17
/// significant digits, so identical inputs serialize byte-identically and
/// doubles survive a round-trip.
class Json {
public:
    using Array = std::vector<Json>;

    Json() : value_(nullptr) {}
    Json(std::nullptr_t) : value_(nullptr) {}
    Json(bool b) : value_(b) {}
    Json(int v) : value_(static_cast<std::int64_t>(v)) {}
    Json(std::uint64_t v) : value_(static_cast<std::int64_t>(v)) {}
    Json(std::int64_t v) : value_(v) {}
    Json(double v) : value_(v) {}
    Json(const char* s) : value_(std::string(s)) {}
    Json(std::string s) : value_(std::move(s)) {}
    Json(Array a) : value_(std::move(a)) {}

    static Json object() {
        Json j;
        j.value_ = Object{};
        return j;
    }

    /// Object field access; inserts preserving order.
    Json& operator[](const std::string& key);

    void push_back(Json v);

    std::string dump(int indent = 2) const;

private:
    struct Object {
        std::vector<std::pair<std::string, Json>> fields;
    };
    std::variant<std::nullptr_t, bool, std::int64_t, double, std::string, Array, Object> value_;

    void write(std::string& out, int indent, int depth) const;
};

/// FNV-1a hash of a string, as fixed-width hex; identifies configs in
/// reports.
std::string fnv1a_hex(const std::string& text);

/// Write text to a file atomically enough for our purposes (truncate +
/// write). Creates parent directories.
void write_file(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace sojourn

#endif
