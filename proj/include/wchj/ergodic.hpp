#pragma once

#include <vector>

#include "wchj/constants.hpp"
#include "wchj/problem.hpp"
#include "wchj/solver.hpp"
#include "wchj/value_field.hpp"

namespace wchj {

/// Ergodic constant from the long-time slope of the spatial mean of u_1.
struct SlopeEstimate {
    double c = 0.0;        // minus the least-squares slope over the last half
    double c_tail = 0.0;   // same over the last quarter
    double spread = 0.0;   // |c - c_tail|
    bool converged = false;
};

SlopeEstimate ergodic_constant_slope(const ValueField& vf, double T_long, double tol_c);
SlopeEstimate ergodic_constant_slope(const ProblemSpec& spec, const SchemeParams& params,
                                     double T_long);

/// Ergodic functions and constant from relative value iteration, with
/// stationarity residuals of problem (E) measured by the Lax-Friedrichs
/// numerical Hamiltonian.
struct ErgodicSolution {
    double c = 0.0;                 // relative-value estimate
    std::vector<Field> v;           // normalized: v_1(origin node) = 0
    int iterations = 0;
    bool converged = false;

    std::vector<Field> residual;                // per state
    std::vector<std::vector<char>> kink_mask;   // per state, dilated by one node
    double residual_max = 0.0;                  // over every node
    double residual_max_smooth = 0.0;           // kink nodes excluded
    double kink_fraction = 0.0;
    double tol_e = 0.0;
};

ErgodicSolution ergodic_functions(const ProblemSpec& spec, const SchemeParams& params,
                                  double tol_fix = 1e-8, int max_iterations = 20000);

/// Large-time convergence ladder d(t) = max_k ||u_k(.,t) + c t - v_k||_inf.
/// The reference v is extracted from the run itself at t_extract > T_long
/// (so d(T_long) stays a genuine convergence measurement, not an identity),
/// and c is the run's own late-time drift, accurate to the fixed-point
/// tolerance once the dynamics have settled.
struct ConvergenceAudit {
    std::vector<double> t;
    std::vector<double> d;
    double c_used = 0.0;
    double c_rvi_gap = 0.0;  // |c_used - es.c| diagnostic
    double t_extract = 0.0;
    double tol_conv = 0.0;
    double d_final = 0.0;
    bool decreasing_after_transient = false;
    bool passed = false;
};

ConvergenceAudit convergence_audit(const ProblemSpec& spec, const SchemeParams& params,
                                   const ErgodicSolution& es, double T_long);

/// Same audit against a precomputed field; `vf` must store the ladder times,
/// T_long, t_extract and t_extract - 1.
ConvergenceAudit convergence_audit_from(const ValueField& vf, const ProblemSpec& spec,
                                        const SchemeParams& params, const ErgodicSolution& es,
                                        double T_long, double t_extract);

/// Ladder times used by the audit (snapped to the lattice, capped at T_long).
std::vector<double> convergence_ladder(double T_long, double dt);

/// Late-time drift -d/dt of the mean of u_1, measured over the final unit
/// window ending at t_end.
double discrete_drift(const ValueField& vf, double t_end);

}  // namespace wchj
