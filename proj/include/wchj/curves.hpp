#pragma once

#include <vector>

#include "wchj/ergodic.hpp"
#include "wchj/problem.hpp"
#include "wchj/value_field.hpp"

namespace wchj {

/// Discretized backward extremal-curve candidate on [-T, 0]: one greedy
/// one-step minimization per step against the stationary fields, with the
/// switching-weight clock advancing along the whole window (clock0 lets a
/// window continue an earlier one, matching the concatenation construction).
struct Curve {
    int start_state = 0;  // 0-based
    double T = 0.0, dt = 0.0, clock0 = 0.0;

    std::vector<double> s;       // 0, -dt, ..., -T (window-local)
    std::vector<Vec> gamma;      // wrapped to [0,1)
    std::vector<Vec> q;          // velocity per step
    std::vector<std::vector<double>> weights;  // phi(clock0 + s_k), per node
    std::vector<double> step_defect;

    double defect_full = 0.0;      // whole-window cost defect
    double defect_unit_max = 0.0;  // max |defect| over unit-length subwindows
    bool boundary_flag = false;    // argmin hit the velocity box: untrusted
    int kink_steps = 0;            // steps whose foot touches a kink cell of v
};

Curve extract_curve(const ErgodicSolution& es, const Vec& x, int start_state_1based, double T,
                    const ProblemSpec& spec, const SchemeParams& params, double clock0 = 0.0);

/// Along-curve checks of the extremal identities, gradients of v by centered
/// differences, kink nodes excluded (counted). The Fenchel-Young defect is
/// additionally reported unsigned over every node, kinks included.
struct CurveIdentityReport {
    double max_fenchel_defect = 0.0;        // smooth nodes: |L + H(p) - p.q|
    double max_stationarity_defect = 0.0;   // smooth nodes: |H(p) + coupling - c|
    double min_fenchel = 0.0;               // min over all nodes of L + H(p) - p.q
    double excluded_fraction = 0.0;
    bool low_confidence = false;            // > 20% of nodes excluded
};

CurveIdentityReport along_curve_identities(const Curve& c, const ErgodicSolution& es,
                                           const ProblemSpec& spec);

/// Scaling-inequality audit: left = u~_i(x,T) - sum_k phi_k(-T) u~_k(gamma(-T), tau)
/// against right = v_i(x) - sum_k phi_k(-T) v_k(gamma(-T)) + (1 + tau T/(T-tau)) A r,
/// r = tau/(T-tau), on drift-normalized fields u~ = u + c t. A failed audit
/// widens A once (logged) before reporting failure. Also reports the
/// coupling-term bound realizing the weight-gap estimate.
struct StabilityReport {
    double tau = 0.0, T = 0.0, ratio = 0.0;
    double lhs = 0.0, rhs = 0.0, margin = 0.0;
    double modulus_a = 0.0;
    bool widened = false;
    bool holds = false;

    double coupling_term = 0.0;   // | int (phi_i - phi_j)(v_j - v_i)(gamma) |, worst pair
    double coupling_bound = 0.0;  // sup|v_j - v_i| * weight-gap integral
    bool coupling_holds = false;

    double slack = 0.0;
    std::string note;
};

StabilityReport stability_audit(const Curve& c, const ValueField& vf, const ErgodicSolution& es,
                                double tau, double T, const ProblemSpec& spec,
                                const SchemeParams& params, double c_norm,
                                double delta0 = 0.1);

/// Time/space Lipschitz audit of a computed evolution against the assembled C1.
struct LipschitzReport {
    double c1 = 0.0;
    double slack = 0.0;
    double max_excess = 0.0;       // max over stored pairs of ||du|| - C1 h - slack
    double worst_quotient = 0.0;   // max ||u(t+h)-u(t)||/h over stored pairs
    double spatial_lipschitz = 0.0;  // empirical, reported only
    bool holds = false;
};

LipschitzReport lipschitz_audit(const ValueField& vf, const ProblemSpec& spec,
                                const SchemeParams& params);

}  // namespace wchj
