#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "wchj/problem.hpp"

namespace wchj {

/// Parsed `key = value` configuration text: one pair per line, `#` comments,
/// values are numbers, bare words, or `name(arg, ...)` calls (rows of a
/// matrix separated by `;`). Duplicate keys are rejected.
struct ConfigText {
    std::map<std::string, std::string> entries;
    std::string source;

    static ConfigText parse(const std::string& text);
    static ConfigText load(const std::filesystem::path& path);

    bool has(const std::string& key) const;
    std::string get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;
    double number(const std::string& key) const;
    double number_or(const std::string& key, double fallback) const;
    int integer(const std::string& key) const;
};

/// Problem schema: dim (default 1), grid_n, m, T, dt, q_max (optional),
/// coupling = matrix(r11, r12; r21, r22), and per state k:
/// state<k>.kappa, state<k>.potential, state<k>.g, where field values are
/// cosine(a, freq, phase) | sine(a, freq, phase) | constant(v) | zero() |
/// values(v0, v1, ...). In dim 2 the wave presets use x0 + x1 as argument.
ProblemSpec problem_from_config(const ConfigText& cfg, const std::string& fallback_name = "");
ProblemSpec load_problem(const std::filesystem::path& path);

/// Field expression evaluator (exposed for tests and presets).
Field field_from_expression(const std::string& expr, const TorusGrid& grid);

/// Battery suite schema: problems = name, name, ...; tolerance scale and
/// absolute overrides; seed; threads.
struct SuiteConfig {
    std::vector<std::string> problems;
    double tol_scale = 1.0;
    std::uint64_t seed = 20240817;
    int threads = 1;
    std::map<std::string, double> overrides;  // e.g. "tol_conv" -> absolute value
    std::filesystem::path problems_dir;       // where problem files live, may be empty
};

SuiteConfig suite_from_config(const ConfigText& cfg);
SuiteConfig load_suite(const std::filesystem::path& path);

}  // namespace wchj
