#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wchj/constants.hpp"
#include "wchj/problem.hpp"
#include "wchj/value_field.hpp"

namespace wchj {

struct SolveOptions {
    std::vector<double> snapshot_times;  // snapped to the lattice; 0 and T always kept
    int stride = 0;                      // additionally store every `stride` steps (0: off)
};

/// One-step weight matrices: rows W[i][k] = phi^{(i)}_k at -h/2 and -h,
/// renormalized to sum exactly to one (scheme hygiene: keeps constant shifts
/// and the partition of unity exact in floating point).
struct StepWeights {
    int m = 0;
    std::vector<std::vector<double>> mid;  // [state][k]
    std::vector<std::vector<double>> end;  // [state][k]
};
StepWeights step_weights(const CouplingMatrix& coupling, double h);

struct NodeMin {
    double value = 0.0;
    Vec q{0.0, 0.0};
    bool boundary = false;
};

/// Node-level semi-Lagrangian minimization over the velocity box: the single
/// kernel behind solve(), dpp_window_check() and the curve extraction.
/// Functional: h * sum_k wm_k L_k(x - (h/2) q, q) + sum_k we_k prev_k(x - h q),
/// one-point midpoint quadrature, periodic multilinear interpolation, uniform
/// sampling plus golden-section refinement around the discrete argmin
/// (ties resolved toward the lexicographically smallest velocity).
class SlKernel {
public:
    SlKernel(const ProblemSpec& spec, const SchemeParams& params, const ProblemConstants& pc);

    NodeMin minimize(std::span<const Field> prev, const Vec& x, int state,
                     std::span<const double> w_mid, std::span<const double> w_end,
                     double h) const;

    /// Advances all states by one step of size params.dt with the cached
    /// one-step weights; counts velocity-box boundary hits.
    void step(const std::vector<Field>& prev, std::vector<Field>& next,
              std::size_t& boundary_hits) const;

    double q_box() const { return q_box_; }
    const StepWeights& weights() const { return w_; }

private:
    struct Prepared;  // per-(state,h) weighted fields for the fast path
    Prepared prepare(std::span<const Field> prev, int state, std::span<const double> w_mid,
                     std::span<const double> w_end) const;
    NodeMin minimize_prepared(const Prepared& pr, const Vec& x, double h) const;

    const ProblemSpec& spec_;
    const TorusGrid& grid_;
    SchemeParams params_;
    StepWeights w_;
    double q_box_ = 0.0;
    bool all_quadratic_ = true;
    std::vector<LagrangianSpec> lagrangians_;
};

/// Semi-Lagrangian solve of the system on [0, T]: iterated one-step dynamic
/// programming with the exact switching weights.
ValueField solve(const ProblemSpec& spec, const SchemeParams& params,
                 const SolveOptions& opt = {});

/// Monotone Lax-Friedrichs finite-difference oracle. Rejects the step unless
/// dt (dim * theta_max / dx + max_k c_kk) <= 1/2.
ValueField solve_lf(const ProblemSpec& spec, const SchemeParams& params,
                    const SolveOptions& opt = {});

/// Largest admissible LF step that exactly divides `dt_outer`.
double lf_admissible_dt(const ProblemSpec& spec, const SchemeParams& params,
                        const ProblemConstants& pc, double dt_outer);

struct WindowCheckReport {
    double h = 0.0, t = 0.0;
    int n_probe = 0;
    double max_discrepancy = 0.0;  // max over probes of |re-minimized RHS - stored u|
    double signed_min = 0.0;       // most negative (RHS - u): RHS below the stored value
};

/// Re-minimizes the window-h dynamic programming principle at random probe
/// nodes against the stored field at t-h and compares with the field at t.
WindowCheckReport dpp_window_check(const ValueField& vf, const ProblemSpec& spec,
                                   const SchemeParams& params, double h, double t, int n_probe,
                                   std::uint64_t seed);

}  // namespace wchj
