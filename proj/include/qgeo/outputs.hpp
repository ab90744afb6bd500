#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qgeo {

/// 17 significant digits: lossless double round-trip, stable byte-for-byte.
inline std::string format_g17(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

inline std::string format_g(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%g", value);
    return buffer;
}

/// Simple CSV accumulator; all numbers go through format_g17.
class CsvBuilder {
public:
    explicit CsvBuilder(const std::vector<std::string>& header) {
        append_row(header);
        columns_ = header.size();
    }

    void append_row(const std::vector<std::string>& cells) {
        std::string line;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) {
                line += ',';
            }
            line += cells[i];
        }
        content_ += line;
        content_ += '\n';
    }

    void append_numbers(const std::vector<double>& cells) {
        std::vector<std::string> formatted;
        formatted.reserve(cells.size());
        for (double v : cells) {
            formatted.push_back(format_g17(v));
        }
        append_row(formatted);
    }

    std::size_t columns() const { return columns_; }
    const std::string& content() const { return content_; }

private:
    std::string content_;
    std::size_t columns_ = 0;
};

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open output file: " + path.string());
    }
    out << content;
    if (!out) {
        throw std::runtime_error("failed writing output file: " + path.string());
    }
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open file: " + path.string());
    }
    std::string content((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
    return content;
}

}  // namespace qgeo
