#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>

namespace uavbeam {

/// Shortest round-trip decimal form of a double (std::to_chars), so repeated
/// runs emit byte-identical artifacts.
inline std::string csv_format(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{})
        throw std::runtime_error("csv: double formatting failed");
    return std::string(buf, end);
}

/// Minimal comma-separated writer with deterministic number formatting.
class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path) : os_(path), path_(path) {
        if (!os_)
            throw std::runtime_error("csv: cannot open '" + path + "' for writing");
    }

    void header(std::initializer_list<std::string_view> columns) {
        bool first = true;
        for (auto c : columns) {
            if (!first) os_ << ", ";
            os_ << c;
            first = false;
        }
        os_ << "\n";
    }

    template <typename... Ts> void row(const Ts&... values) {
        bool first = true;
        ((write_cell(values, first), first = false), ...);
        os_ << "\n";
    }

    void close() {
        os_.close();
        if (os_.fail())
            throw std::runtime_error("csv: write failed for '" + path_ + "'");
    }

  private:
    void write_cell(double v, bool first) {
        if (!first) os_ << ", ";
        os_ << csv_format(v);
    }
    void write_cell(uint64_t v, bool first) {
        if (!first) os_ << ", ";
        os_ << v;
    }
    void write_cell(int v, bool first) {
        if (!first) os_ << ", ";
        os_ << v;
    }
    void write_cell(const std::string& v, bool first) {
        if (!first) os_ << ", ";
        os_ << v;
    }

    std::ofstream os_;
    std::string path_;
};

} // namespace uavbeam
