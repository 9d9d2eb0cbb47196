#include "sojourn/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sojourn/errors.hpp"

namespace sojourn {

Json& Json::operator[](const std::string& key) {
    if (!std::holds_alternative<Object>(value_)) value_ = Object{};
    auto& fields = std::get<Object>(value_).fields;
    for (auto& [k, v] : fields)
        if (k == key) return v;
    fields.emplace_back(key, Json());
    return fields.back().second;
}

void Json::push_back(Json v) {
    if (!std::holds_alternative<Array>(value_)) value_ = Array{};
    std::get<Array>(value_).push_back(std::move(v));
}

namespace {

void write_escaped(std::string& out, const std::string& s) {
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

}  // namespace

void Json::write(std::string& out, int indent, int depth) const {
    auto pad = [&](int d) {
        if (indent > 0) out.append(static_cast<std::size_t>(indent) * d, ' ');
    };
    auto newline = [&] {
        if (indent > 0) out += '\n';
    };

    if (std::holds_alternative<std::nullptr_t>(value_)) {
        out += "null";
    } else if (std::holds_alternative<bool>(value_)) {
        out += std::get<bool>(value_) ? "true" : "false";
    } else if (std::holds_alternative<std::int64_t>(value_)) {
        out += std::to_string(std::get<std::int64_t>(value_));
    } else if (std::holds_alternative<double>(value_)) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", std::get<double>(value_));
        out += buf;
    } else if (std::holds_alternative<std::string>(value_)) {
        write_escaped(out, std::get<std::string>(value_));
    } else if (std::holds_alternative<Array>(value_)) {
        const auto& arr = std::get<Array>(value_);
        if (arr.empty()) {
            out += "[]";
            return;
        }
        out += '[';
        newline();
        for (std::size_t i = 0; i < arr.size(); ++i) {
            pad(depth + 1);
            arr[i].write(out, indent, depth + 1);
            if (i + 1 < arr.size()) out += ',';
            newline();
        }
        pad(depth);
        out += ']';
    } else {
        const auto& fields = std::get<Object>(value_).fields;
        if (fields.empty()) {
            out += "{}";
            return;
        }
        out += '{';
        newline();
        for (std::size_t i = 0; i < fields.size(); ++i) {
            pad(depth + 1);
            write_escaped(out, fields[i].first);
            out += indent > 0 ? ": " : ":";
            fields[i].second.write(out, indent, depth + 1);
            if (i + 1 < fields.size()) out += ',';
            newline();
        }
        pad(depth);
        out += '}';
    }
}

std::string Json::dump(int indent) const {
    std::string out;
    write(out, indent, 0);
    if (indent > 0) out += '\n';
    return out;
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::config, "cannot open for writing: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorCode::config, "write failed: " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace sojourn
