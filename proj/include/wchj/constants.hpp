#pragma once

#include <vector>

#include "wchj/problem.hpp"

namespace wchj {

/// Problem constants ledger. Every tolerance and envelope constant used by the
/// audits and the acceptance battery is assembled here, from the problem data
/// alone, before any scheme output is seen.
struct ProblemConstants {
    /// Growth constant C of the (A4)-type sandwich; for quadratic states
    /// max(kappa, 1/kappa, 2 max|V|), at least 1.
    double growth_c = 1.0;

    /// M1: max over states and nodes of H_k(x, Dg_k) + max_j (g_k - g_j),
    /// gradients by centered differences.
    double m1 = 0.0;

    /// C1 = max(M1, max_k max_x |L_k(x,0)| + max_x max_{j,k} (g_j - g_k)):
    /// the time-Lipschitz constant of the evolution.
    double c1 = 0.0;

    /// Default velocity box: 2 sqrt(2 C (C + max_k osc(g_k) + 1)).
    double q_max_default = 0.0;

    /// Gradient range P from coercivity at level max(M1, 1):
    /// |p| <= sqrt(2 C (level + C)).
    double p_bar = 0.0;

    /// Lax-Friedrichs dissipation per state: max |dH_k/dp| over |p| <= p_bar.
    std::vector<double> theta_lf;
    double theta_max = 0.0;

    double max_g_osc = 0.0;   // max_k (max g_k - min g_k)
    double lip_lx = 0.0;      // max_k max_x |D V_k| (x-Lipschitz scale of L)
    double c_max = 0.0;       // max diagonal coupling rate

    // --- tolerances and envelopes (h = dx + dt) ---
    double tol_c(const TorusGrid& g, double dt) const { return 5.0 * (g.spacing() + dt); }
    double tol_conv(const TorusGrid& g, double dt) const { return 10.0 * (g.spacing() + dt); }

    /// Crosscheck envelope constant K for sup|u_SL - u_LF| <= 5 (dx+dt) K at
    /// horizon T. The LF flux adds numerical viscosity theta dx/2 (modified
    /// equation), which biases the long-time drift by at most theta (dx+dt)
    /// per unit time; the semi-Lagrangian side contributes O(dx+dt).
    double k_cross(double T) const { return 1.0 + 0.5 * theta_max * T; }

    /// Drift-aligned shape comparison constant (no dissipation drift term).
    double k_shape() const { return c1; }

    /// Residual tolerance constant for the ergodic audit: residuals are
    /// measured with the LF numerical Hamiltonian, so they inherit its
    /// dissipation term of size theta |D+v - D-v| / 2.
    double tol_e(const TorusGrid& g, double dt) const {
        return 10.0 * (g.spacing() + dt) * (1.0 + theta_max);
    }

    /// Window-check bound: re-minimizing the DPP over a window h against the
    /// stepped field differs by the trajectory-class gap h^2 Lip_x(L) Q plus
    /// the interpolation envelope dx p_bar / 4.
    double one_step_bound(const TorusGrid& g, double h) const {
        double q = q_max_default;
        return h * h * lip_lx * q + 0.25 * g.spacing() * p_bar;
    }

    /// Kink classifier threshold on undivided second differences of v:
    /// 10 dx^2 (2 pi)^2 max(1, scale) separates slope jumps (~ jump * dx)
    /// from smooth curvature (~ v'' dx^2) at desk resolutions.
    double kink_threshold(const TorusGrid& g, double v_scale) const {
        double two_pi_sq = 39.478417604357434;
        return 10.0 * g.spacing() * g.spacing() * two_pi_sq * std::max(1.0, v_scale);
    }
};

ProblemConstants assemble_constants(const ProblemSpec& spec);

}  // namespace wchj
