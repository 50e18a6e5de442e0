#pragma once

#include <optional>
#include <string>
#include <vector>

namespace wchj {

/// Coupling matrix of the weakly coupled system: row k feeds the k-th
/// equation's zeroth-order term sum_j c_kj u_j. Sign pattern c_kk >= 0,
/// c_kj <= 0 off the diagonal, and both row and column sums vanish.
struct CouplingMatrix {
    int m = 0;
    std::vector<double> a;  // row-major m*m

    CouplingMatrix() = default;
    CouplingMatrix(int m_, std::vector<double> entries);

    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * m + j]; }
    double& at(int i, int j) { return a[static_cast<std::size_t>(i) * m + j]; }

    double max_diagonal() const;

    /// [[lam, -lam], [-lam, lam]]
    static CouplingMatrix symmetric_two_state(double lam);
    /// Cyclic m=3 chain: state k hands off to k+1 at unit rate times `rate`.
    static CouplingMatrix cyclic_three_state(double rate = 1.0);
};

/// Violating proper subset I for condition (M), or nullopt when irreducible.
/// Enumerates all proper nonempty subsets; fine for m <= 6.
std::optional<std::vector<int>> irreducibility_witness(const CouplingMatrix& c);

std::string subset_to_string(const std::vector<int>& subset);

}  // namespace wchj
