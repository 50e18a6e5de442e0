#include "wchj/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace wchj::csv {

std::string format(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Writer::Writer(std::vector<std::string> header) : columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out_ += ',';
        out_ += header[i];
    }
    out_ += '\n';
}

void Writer::row(const std::vector<double>& values) {
    if (values.size() != columns_) throw std::invalid_argument("csv row width mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out_ += ',';
        out_ += format(values[i]);
    }
    out_ += '\n';
}

void Writer::raw_row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw std::invalid_argument("csv row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ += ',';
        out_ += cells[i];
    }
    out_ += '\n';
}

void Writer::save(const std::filesystem::path& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string());
    f << out_;
}

}  // namespace wchj::csv
