#include "wchj/problem.hpp"

#include <cmath>
#include <stdexcept>

#include "wchj/weights.hpp"

namespace wchj {

bool ValidationReport::accepted() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

std::string ValidationReport::first_failure() const {
    for (const auto& c : checks)
        if (!c.pass) return c.name + ": " + c.detail;
    return "";
}

namespace {

void add(ValidationReport& r, std::string name, bool pass, std::string detail = "") {
    r.checks.push_back({std::move(name), pass, std::move(detail)});
}

}  // namespace

ValidationReport validate(const ProblemSpec& spec) {
    ValidationReport r;
    const auto& g = spec.grid;

    add(r, "grid.dim", g.dim == 1 || g.dim == 2, "dim must be 1 or 2");
    add(r, "grid.points", g.n >= 4, "need at least 4 points per axis");

    const int m = spec.coupling.m;
    add(r, "coupling.m", m >= 2, "need at least 2 states");
    add(r, "hamiltonians.count", static_cast<int>(spec.hamiltonians.size()) == m,
        "expected " + std::to_string(m) + " Hamiltonians");
    add(r, "initial.count", static_cast<int>(spec.initial.size()) == m,
        "expected " + std::to_string(m) + " initial fields");

    for (std::size_t k = 0; k < spec.initial.size(); ++k)
        add(r, "initial[" + std::to_string(k + 1) + "].shape",
            spec.initial[k].size() == g.node_count(), "field not sampled on the grid");

    for (std::size_t k = 0; k < spec.hamiltonians.size(); ++k) {
        std::string name = "hamiltonian[" + std::to_string(k + 1) + "]";
        try {
            spec.hamiltonians[k].check_invariants(g);
            add(r, name, true);
        } catch (const std::exception& e) {
            add(r, name, false, e.what());
        }
    }

    // coupling sign pattern and balance
    const auto& c = spec.coupling;
    bool signs_ok = true;
    std::string sign_detail;
    for (int i = 0; i < m && signs_ok; ++i)
        for (int j = 0; j < m; ++j) {
            double v = c(i, j);
            if ((i == j && v < 0.0) || (i != j && v > 0.0)) {
                signs_ok = false;
                sign_detail = "entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                              ") violates the sign pattern";
                break;
            }
        }
    add(r, "coupling.signs", signs_ok, sign_detail);

    bool rows_ok = true, cols_ok = true;
    std::string row_detail, col_detail;
    for (int i = 0; i < m; ++i) {
        double rs = 0.0, cs = 0.0;
        for (int j = 0; j < m; ++j) {
            rs += c(i, j);
            cs += c(j, i);
        }
        if (std::abs(rs) > 1e-12 && rows_ok) {
            rows_ok = false;
            row_detail = "row " + std::to_string(i + 1) + " sums to " + std::to_string(rs);
        }
        if (std::abs(cs) > 1e-12 && cols_ok) {
            cols_ok = false;
            col_detail = "column " + std::to_string(i + 1) + " sums to " + std::to_string(cs);
        }
    }
    add(r, "coupling.row_sums", rows_ok, row_detail);
    add(r, "coupling.column_sums", cols_ok, col_detail);

    if (m == 2) {
        bool shape = c(0, 0) > 0.0 && c(1, 1) > 0.0 && c(0, 1) == -c(0, 0) && c(1, 0) == -c(1, 1);
        add(r, "coupling.two_state_shape", shape,
            "expected [[c1,-c1],[-c2,c2]] with positive rates");
    }

    auto witness = irreducibility_witness(c);
    add(r, "coupling.irreducible", !witness.has_value(),
        witness ? "isolated subset I = " + subset_to_string(*witness) : "");

    if (!witness) {
        auto bad = spectral_premise_violation(c);
        add(r, "coupling.spectrum", !bad.has_value(), bad.value_or(""));
    }

    add(r, "time.dt", spec.dt > 0.0 && spec.dt <= spec.horizon, "need 0 < dt <= T");
    double steps = spec.horizon / spec.dt;
    add(r, "time.lattice", std::abs(steps - std::round(steps)) < 1e-9,
        "horizon must be an integer number of steps");
    if (spec.q_max > 0.0)
        add(r, "scheme.reach", spec.q_max * spec.dt >= g.spacing() - 1e-15,
            "Q_max*dt must cover at least one cell");

    return r;
}

void require_valid(const ProblemSpec& spec) {
    auto r = validate(spec);
    if (!r.accepted()) throw std::invalid_argument("invalid problem spec: " + r.first_failure());
}

}  // namespace wchj
