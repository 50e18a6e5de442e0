#include "wchj/constants.hpp"

#include <algorithm>
#include <cmath>

namespace wchj {

ProblemConstants assemble_constants(const ProblemSpec& spec) {
    ProblemConstants pc;
    const auto& g = spec.grid;
    const int m = spec.m();

    for (const auto& h : spec.hamiltonians)
        pc.growth_c = std::max(pc.growth_c, h.growth_constant());

    // M1: residual of the initial data as a subsolution candidate
    for (int k = 0; k < m; ++k) {
        const Field& gk = spec.initial[k];
        for (std::size_t idx = 0; idx < g.node_count(); ++idx) {
            Vec p = centered_gradient(g, gk, idx);
            double coupling_part = 0.0;
            for (int j = 0; j < m; ++j)
                coupling_part = std::max(coupling_part, gk[idx] - spec.initial[j][idx]);
            pc.m1 = std::max(pc.m1, spec.hamiltonians[k].eval_at_node(g, idx, p) + coupling_part);
        }
    }

    double l0_max = 0.0;  // max |L_k(x, 0)| = H-conjugate at zero velocity
    for (int k = 0; k < m; ++k) {
        const auto& h = spec.hamiltonians[k];
        if (h.kind == HKind::quadratic) {
            l0_max = std::max(l0_max, sup_norm(h.potential));
            double lx = 0.0;
            for (std::size_t idx = 0; idx < g.node_count(); ++idx)
                lx = std::max(lx, std::hypot(centered_gradient(g, h.potential, idx)[0],
                                             centered_gradient(g, h.potential, idx)[1]));
            pc.lip_lx = std::max(pc.lip_lx, lx);
        } else {
            // L(x,0) = -min_p H(x,p); table row minima give the bound
            const std::size_t st = h.table.size() / h.table_nodes;
            double node_var = 0.0;
            for (int node = 0; node < h.table_nodes; ++node) {
                const double* row = h.table.data() + node * st;
                l0_max = std::max(l0_max, std::abs(*std::min_element(row, row + st)));
            }
            if (h.table_nodes > 1) {
                for (std::size_t j = 0; j < st; ++j) {
                    double lo = h.table[j], hi = h.table[j];
                    for (int node = 1; node < h.table_nodes; ++node) {
                        lo = std::min(lo, h.table[node * st + j]);
                        hi = std::max(hi, h.table[node * st + j]);
                    }
                    node_var = std::max(node_var, hi - lo);
                }
                pc.lip_lx = std::max(pc.lip_lx, node_var / g.spacing());
            }
        }
    }

    double g_gap = 0.0;  // max over x of max_{j,k} (g_j - g_k)
    for (std::size_t idx = 0; idx < g.node_count(); ++idx) {
        double lo = spec.initial[0][idx], hi = lo;
        for (int k = 1; k < m; ++k) {
            lo = std::min(lo, spec.initial[k][idx]);
            hi = std::max(hi, spec.initial[k][idx]);
        }
        g_gap = std::max(g_gap, hi - lo);
    }
    pc.c1 = std::max(pc.m1, l0_max + g_gap);

    for (int k = 0; k < m; ++k) {
        double lo = *std::min_element(spec.initial[k].begin(), spec.initial[k].end());
        double hi = *std::max_element(spec.initial[k].begin(), spec.initial[k].end());
        pc.max_g_osc = std::max(pc.max_g_osc, hi - lo);
    }

    const double C = pc.growth_c;
    pc.q_max_default = 2.0 * std::sqrt(2.0 * C * (C + pc.max_g_osc + 1.0));
    pc.p_bar = std::sqrt(2.0 * C * (std::max(pc.m1, 1.0) + C));

    pc.theta_lf.resize(m);
    for (int k = 0; k < m; ++k) {
        pc.theta_lf[k] = spec.hamiltonians[k].max_gradient(pc.p_bar);
        pc.theta_max = std::max(pc.theta_max, pc.theta_lf[k]);
    }

    pc.c_max = spec.coupling.max_diagonal();
    return pc;
}

}  // namespace wchj
