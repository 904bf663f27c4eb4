#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "sscl/version.hpp"

namespace sscl {

// Shortest round-trip decimal representation, locale-independent.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// "# key=value key=value ..." header embedding the resolved config, so every
// artifact is regenerable from its own header.
inline std::string header_line(const std::map<std::string, std::string>& meta) {
    std::string line = "# version=" + std::string(kVersion);
    for (const auto& [k, v] : meta) line += " " + k + "=" + v;
    return line;
}

inline void write_csv(const std::filesystem::path& path,
                      const std::map<std::string, std::string>& meta,
                      const std::vector<std::string>& columns,
                      const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path.string());
    out << header_line(meta) << "\n";
    for (size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
        out << "\n";
    }
}

// Snapshot dump: one record per snapshot, time then the cell values.
inline void write_snapshots(const std::filesystem::path& path,
                            const std::map<std::string, std::string>& meta,
                            const std::vector<double>& times,
                            const std::vector<std::vector<double>>& fields) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_snapshots: cannot open " + path.string());
    out << header_line(meta) << "\n";
    for (size_t k = 0; k < times.size(); ++k) {
        out << format_double(times[k]);
        for (double v : fields[k]) out << "," << format_double(v);
        out << "\n";
    }
}

}  // namespace sscl
