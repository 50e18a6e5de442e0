#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace wchj::csv {

/// Formats a double with 17 significant digits (round-trip exact).
std::string format(double v);

/// CSV table: header row, %.17g floats, trailing newline.
class Writer {
public:
    explicit Writer(std::vector<std::string> header);

    void row(const std::vector<double>& values);
    void raw_row(const std::vector<std::string>& cells);

    std::string str() const { return out_; }
    void save(const std::filesystem::path& path) const;

private:
    std::size_t columns_;
    std::string out_;
};

}  // namespace wchj::csv
