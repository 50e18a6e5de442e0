#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace wchj {

inline constexpr const char* kToolVersion = "0.1.0";

/// FNV-1a 64-bit, used to fingerprint config text in run manifests.
std::uint64_t fnv1a(const std::string& text);

/// Record of one CLI run: enough to reproduce the data outputs byte for byte
/// (timings are informational and excluded from the reproducibility contract).
struct RunManifest {
    std::string subcommand;
    std::string config_path;
    std::uint64_t config_hash = 0;
    nlohmann::ordered_json parameters;
    std::vector<std::pair<std::string, double>> phase_seconds;
    std::vector<std::string> warnings;
    std::vector<std::uint64_t> seeds;

    nlohmann::ordered_json to_json() const;
    void save(const std::filesystem::path& path) const;
};

}  // namespace wchj
