#pragma once

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "snc/types.hpp"

namespace snc::csv {

// Fixed 10 significant digits so outputs are byte-stable across runs.
inline std::string num(double v) {
    if (v == 0.0) return "0";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline std::string num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

inline std::string quote(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

class Writer {
public:
    explicit Writer(const std::string& path) : path_(path), out_(path, std::ios::binary) {
        if (!out_) throw InputError("cannot write '" + path + "'");
    }

    Writer& row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out_ << ',';
            out_ << quote(fields[i]);
        }
        out_ << '\n';
        if (!out_) throw InputError("write failed for '" + path_ + "'");
        return *this;
    }

private:
    std::string path_;
    std::ofstream out_;
};

// Safe file-name component: anything outside [A-Za-z0-9._-] becomes '_'.
inline std::string file_part(std::string_view s) {
    std::string out;
    for (char c : s) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                  c == '.' || c == '_' || c == '-';
        out += ok ? c : '_';
    }
    return out.empty() ? "_" : out;
}

}  // namespace snc::csv
