#pragma once

#include <cstdint>
#include <vector>

#include "wchj/coupling.hpp"
#include "wchj/grid.hpp"

namespace wchj {

/// One realization of the backward switching chain on [-t, 0]: state k holds
/// for an Exp(c_kk) time, then jumps to j != k with probability -c_kj/c_kk.
/// Simulated as a forward exponential-clock chain on [0, t] and time-flipped.
struct ChainSample {
    int start_state = 0;  // 0-based; state at s = 0
    double t = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> jump_s;  // strictly decreasing, all in (-t, 0)
    std::vector<int> states;     // states[r] = state after r jumps going backward

    int state_at(double s) const;
    int end_state() const { return states.back(); }  // state at s = -t
};

ChainSample sample_chain(const CouplingMatrix& coupling, int start_state_1based, double t,
                         std::uint64_t seed);

struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    double closed_form = 0.0;  // deterministic-weights value, filled by callers
    double z_score = 0.0;
    std::size_t n_samples = 0;
};

/// Monte Carlo estimate of E_i[psi_{nu(-t)}(x)] with its standard error.
/// Sample k draws its RNG stream from splitmix64(seed ^ (k+1)*golden), so the
/// result depends only on (seed, inputs), never on evaluation order.
McEstimate mc_expectation(const CouplingMatrix& coupling, int start_state_1based, double t,
                          const std::vector<Field>& psi, const TorusGrid& grid, const Vec& x,
                          std::size_t n_samples, std::uint64_t seed);

/// Stable per-stream seed mix (splitmix64 finalizer).
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace wchj
