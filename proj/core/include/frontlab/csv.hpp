#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "frontlab/errors.hpp"

namespace frontlab::csv {

/// CSV writer with a mandatory header row and locale-free %.12g formatting,
/// so reruns produce byte-identical bodies.
class Writer {
public:
    Writer(const std::filesystem::path& path, const std::vector<std::string>& header)
        : out_(path) {
        if (!out_.is_open()) {
            throw config_error("cannot open output file: " + path.string());
        }
        for (size_t i = 0; i < header.size(); ++i) {
            out_ << (i ? "," : "") << header[i];
        }
        out_ << "\n";
        columns_ = header.size();
    }

    void row(const std::vector<double>& values) {
        if (values.size() != columns_) {
            throw contract_error("csv row width does not match the header");
        }
        char buf[32];
        for (size_t i = 0; i < values.size(); ++i) {
            snprintf(buf, sizeof(buf), "%.12g", values[i]);
            out_ << (i ? "," : "") << buf;
        }
        out_ << "\n";
    }

    void row_text(const std::vector<std::string>& values) {
        if (values.size() != columns_) {
            throw contract_error("csv row width does not match the header");
        }
        for (size_t i = 0; i < values.size(); ++i) {
            out_ << (i ? "," : "") << values[i];
        }
        out_ << "\n";
    }

private:
    std::ofstream out_;
    size_t columns_ = 0;
};

inline std::string format_number(double v) {
    char buf[32];
    snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace frontlab::csv
