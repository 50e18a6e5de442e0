#pragma once

#include <string>
#include <vector>

#include "wchj/grid.hpp"

namespace wchj {

/// Discretization parameters shared by both schemes.
struct SchemeParams {
    double dt = 1.0 / 256;
    double q_max = 0.0;            // 0: use the constants-ledger default
    int q_samples = 33;            // velocity samples per axis, odd >= 3
    int refine_rounds = 3;         // golden-section rounds (4 iterations each) per axis
    std::vector<double> theta_lf;  // LF dissipation per state; empty: ledger default
    int threads = 1;
};

/// Value functions u_k(., t) at a set of stored times, plus the per-step
/// spatial-mean series of every state (for slope estimates).
struct ValueField {
    TorusGrid grid;
    int m = 0;
    std::vector<double> times;                  // stored snapshot times, increasing
    std::vector<std::vector<Field>> fields;     // [time][state]

    std::vector<double> step_times;             // full lattice 0, dt, ..., T
    std::vector<std::vector<double>> mean;      // [state][step]

    double boundary_hit_fraction = 0.0;
    std::vector<std::string> warnings;

    bool has_time(double t) const;
    const std::vector<Field>& at_time(double t) const;
    std::size_t step_index(double t) const;     // index into step_times
};

}  // namespace wchj
