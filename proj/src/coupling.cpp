#include "wchj/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wchj {

CouplingMatrix::CouplingMatrix(int m_, std::vector<double> entries) : m(m_), a(std::move(entries)) {
    if (m < 2) throw std::invalid_argument("CouplingMatrix: need m >= 2");
    if (a.size() != static_cast<std::size_t>(m) * m)
        throw std::invalid_argument("CouplingMatrix: entry count does not match m*m");
}

double CouplingMatrix::max_diagonal() const {
    double d = 0.0;
    for (int i = 0; i < m; ++i) d = std::max(d, (*this)(i, i));
    return d;
}

CouplingMatrix CouplingMatrix::symmetric_two_state(double lam) {
    return CouplingMatrix(2, {lam, -lam, -lam, lam});
}

CouplingMatrix CouplingMatrix::cyclic_three_state(double rate) {
    return CouplingMatrix(3, {rate, -rate, 0.0, 0.0, rate, -rate, -rate, 0.0, rate});
}

std::optional<std::vector<int>> irreducibility_witness(const CouplingMatrix& c) {
    const int m = c.m;
    for (unsigned mask = 1; mask + 1 < (1u << m); ++mask) {
        bool escapes = false;
        for (int i = 0; i < m && !escapes; ++i) {
            if (!(mask & (1u << i))) continue;
            for (int j = 0; j < m; ++j) {
                if (mask & (1u << j)) continue;
                if (c(i, j) != 0.0) { escapes = true; break; }
            }
        }
        if (!escapes) {
            std::vector<int> subset;
            for (int i = 0; i < m; ++i)
                if (mask & (1u << i)) subset.push_back(i);
            return subset;
        }
    }
    return std::nullopt;
}

std::string subset_to_string(const std::vector<int>& subset) {
    std::string s = "{";
    for (std::size_t i = 0; i < subset.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(subset[i] + 1);  // 1-based states in messages
    }
    return s + "}";
}

}  // namespace wchj
