#include "wchj/manifest.hpp"

#include <fstream>

namespace wchj {

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

nlohmann::ordered_json RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["tool"] = "wchj";
    j["version"] = kToolVersion;
    j["subcommand"] = subcommand;
    j["config_path"] = config_path;
    j["config_hash"] = config_hash;
    j["parameters"] = parameters;
    nlohmann::ordered_json timings = nlohmann::ordered_json::object();
    for (const auto& [phase, sec] : phase_seconds) timings[phase] = sec;
    j["timings_seconds"] = timings;
    j["warnings"] = warnings;
    j["seeds"] = seeds;
    return j;
}

void RunManifest::save(const std::filesystem::path& path) const {
    std::ofstream f(path, std::ios::binary);
    f << to_json().dump(2) << "\n";
}

}  // namespace wchj
