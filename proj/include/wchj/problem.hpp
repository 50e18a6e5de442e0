#pragma once

#include <string>
#include <vector>

#include "wchj/coupling.hpp"
#include "wchj/grid.hpp"
#include "wchj/hamiltonian.hpp"

namespace wchj {

/// Full problem data: m Hamiltonians on a shared torus grid, coupling matrix,
/// initial data, horizon and step. Immutable once validated.
struct ProblemSpec {
    std::string name;
    TorusGrid grid;
    std::vector<HamiltonianSpec> hamiltonians;
    CouplingMatrix coupling;
    std::vector<Field> initial;
    double horizon = 1.0;
    double dt = 1.0 / 256;
    double q_max = 0.0;  // 0 requests the constants-ledger default

    int m() const { return coupling.m; }
};

struct CheckResult {
    std::string name;
    bool pass = true;
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckResult> checks;

    bool accepted() const;
    std::string first_failure() const;
};

/// Runs every checkable invariant: grid shape, Hamiltonian convexity and
/// coercivity, coupling sign pattern / row and column sums / irreducibility
/// (M) / spectral premise, list lengths, time-step sanity.
ValidationReport validate(const ProblemSpec& spec);

/// validate() + throw std::invalid_argument on the first failure.
void require_valid(const ProblemSpec& spec);

}  // namespace wchj
