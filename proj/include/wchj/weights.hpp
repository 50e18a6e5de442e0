#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wchj/coupling.hpp"

namespace wchj {

// Convention. The backward chain of (markov) leaves state k at rate c_kk and
// jumps to j != k with probability -c_kj/c_kk, so the occupation weights
// phi^{(i)}_k(s) = P(state k at time s <= 0 | state i at 0) form row i of
// exp(C s). Row i of the matrix exponential is what eval() returns; it is the
// unique choice consistent with the closed forms for two states, the chain
// simulator, and the coupling term of the PDE system.

/// Deterministic switching weights phi_k(s) for s <= 0, started at one state.
struct WeightSystem {
    int m = 0;
    int start_state = 0;  // 0-based

    bool closed_form = false;  // exact two-state expressions
    double rate_start = 0.0;   // c_i for the closed form
    double rate_other = 0.0;   // c_j

    bool spectral = false;  // diagonalizable path
    std::vector<std::complex<double>> eigenvalues;       // nonzero eigenvalues, m-1 of them
    std::vector<std::vector<std::complex<double>>> a;    // a[k][l], coefficient of e^{lambda_l s} in phi_k
    std::vector<double> equilibrium;                     // phi_k(-inf); 1/m under (M) with zero column sums

    CouplingMatrix coupling;   // kept for the ODE fallback
    double ode_step = 1e-3;

    /// phi(s) for s <= 0; phi(0) is exactly the unit vector at start_state.
    std::vector<double> eval(double s) const;
    /// Batch evaluation; `s` must be sorted descending (0 first). Required for
    /// the ODE fallback, cheap pass-through for the analytic paths.
    std::vector<std::vector<double>> eval_many(std::span<const double> s) const;

    /// Slowest decay rate: min over nonzero eigenvalues of Re(lambda).
    double decay_rate() const;
    /// sum_l |a_kl| for the equidistribution tail bound.
    double coeff_scale(int k) const;
    /// Tail bound on int_{-inf}^{-S} |phi_i - phi_j| ds.
    double gap_tail_bound(int i, int j, double S) const;
};

/// Closed-form two-state weights from the paper's general-rate remark:
/// weight on the start state is (c_j + c_i e^{(c1+c2)s})/(c1+c2).
/// States are 1-based here, matching the paper's indices.
WeightSystem weights_two_state(double c1, double c2, int start_state_1based);

/// General-m weights for a validated coupling matrix: spectral representation
/// phi_k(s) = 1/m + sum_l a_kl e^{lambda_l s} when the eigenvector matrix is
/// well conditioned, otherwise a fixed-step A-stable ODE integration.
WeightSystem weights_general(const CouplingMatrix& coupling, int start_state_1based);

/// Nullopt when the spectral premise holds (simple zero eigenvalue, all other
/// eigenvalues with positive real part); otherwise a description of the failure.
std::optional<std::string> spectral_premise_violation(const CouplingMatrix& coupling);

struct GapIntegral {
    double value = 0.0;
    double truncation_bound = 0.0;
    double horizon = 0.0;       // integral computed on [-horizon, 0]
    std::size_t panels = 0;     // final trapezoid panel count
};

/// int_{-inf}^0 |phi_i - phi_j| ds by composite trapezoid on [-S, 0] with S
/// chosen so the spectral tail is below 1e-8, refined until stable.
GapIntegral weight_gap_integral(const WeightSystem& w, int i_1based, int j_1based);

namespace testing {
/// Force the ODE-integration path regardless of conditioning (cross-checks).
WeightSystem weights_general_ode(const CouplingMatrix& coupling, int start_state_1based);
}  // namespace testing

}  // namespace wchj
