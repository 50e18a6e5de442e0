#include "wchj/chain.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace wchj {

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + (stream + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

int ChainSample::state_at(double s) const {
    // state on (jump_s[r], jump_s[r-1]] is states[r-1]... walk the jump list
    std::size_t r = 0;
    while (r < jump_s.size() && jump_s[r] >= s) ++r;
    return states[r];
}

namespace {

// Uniform in (0, 1]; keeps -log(u) finite and the stream portable.
double uniform_pos(std::mt19937_64& eng) {
    for (;;) {
        double u = (eng() >> 11) * 0x1.0p-53;
        if (u > 0.0) return u;
    }
}

}  // namespace

ChainSample sample_chain(const CouplingMatrix& coupling, int start_state_1based, double t,
                         std::uint64_t seed) {
    if (t <= 0.0) throw std::invalid_argument("sample_chain: t must be positive");
    if (start_state_1based < 1 || start_state_1based > coupling.m)
        throw std::invalid_argument("sample_chain: start state out of range");

    ChainSample cs;
    cs.start_state = start_state_1based - 1;
    cs.t = t;
    cs.seed = seed;
    cs.states.push_back(cs.start_state);

    std::mt19937_64 eng(seed);
    double tau = 0.0;  // forward clock; backward position is -tau
    int k = cs.start_state;
    for (;;) {
        double rate = coupling(k, k);
        if (rate <= 0.0)
            throw std::runtime_error("sample_chain: absorbing state " + std::to_string(k + 1) +
                                     " (validation should have rejected this coupling)");
        tau += -std::log(uniform_pos(eng)) / rate;
        if (tau >= t) break;
        // next state: j != k with probability -c_kj / c_kk
        double u = uniform_pos(eng) * rate;
        double acc = 0.0;
        int next = -1;
        for (int j = 0; j < coupling.m; ++j) {
            if (j == k) continue;
            acc += -coupling(k, j);
            if (u <= acc) { next = j; break; }
        }
        if (next < 0) {  // guard against rounding at the top of the scan
            for (int j = coupling.m - 1; j >= 0; --j)
                if (j != k && coupling(k, j) != 0.0) { next = j; break; }
        }
        cs.jump_s.push_back(-tau);
        cs.states.push_back(next);
        k = next;
    }
    return cs;
}

McEstimate mc_expectation(const CouplingMatrix& coupling, int start_state_1based, double t,
                          const std::vector<Field>& psi, const TorusGrid& grid, const Vec& x,
                          std::size_t n_samples, std::uint64_t seed) {
    if (n_samples < 1) throw std::invalid_argument("mc_expectation: need at least one sample");
    std::vector<double> psi_at_x(psi.size());
    for (std::size_t k = 0; k < psi.size(); ++k) psi_at_x[k] = torus_interp(grid, psi[k], x);

    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t s = 0; s < n_samples; ++s) {
        ChainSample cs = sample_chain(coupling, start_state_1based, t, mix_seed(seed, s));
        double v = psi_at_x[cs.end_state()];
        sum += v;
        sum_sq += v * v;
    }
    McEstimate est;
    est.n_samples = n_samples;
    est.estimate = sum / static_cast<double>(n_samples);
    double var = sum_sq / static_cast<double>(n_samples) - est.estimate * est.estimate;
    var = std::max(var, 0.0);
    est.std_error = n_samples > 1 ? std::sqrt(var / static_cast<double>(n_samples - 1)) : 0.0;
    return est;
}

}  // namespace wchj
