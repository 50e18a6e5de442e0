#include "wchj/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wchj {

namespace {

// Clamped linear interpolation on a SampleAxis.
void axis_locate(const SampleAxis& ax, double p, int& j, double& f) {
    double t = (p + ax.bound) / ax.spacing();
    if (t <= 0.0) { j = 0; f = 0.0; return; }
    if (t >= ax.points - 1) { j = ax.points - 2; f = 1.0; return; }
    j = static_cast<int>(t);
    f = t - j;
}

double table_eval(const SampleAxis& ax, const double* row, int dim, const Vec& p) {
    int j0, j1;
    double f0, f1;
    axis_locate(ax, p[0], j0, f0);
    if (dim == 1) return row[j0] * (1 - f0) + row[j0 + 1] * f0;
    axis_locate(ax, p[1], j1, f1);
    const int np = ax.points;
    double v00 = row[j0 * np + j1], v01 = row[j0 * np + j1 + 1];
    double v10 = row[(j0 + 1) * np + j1], v11 = row[(j0 + 1) * np + j1 + 1];
    return (1 - f0) * ((1 - f1) * v00 + f1 * v01) + f0 * ((1 - f1) * v10 + f1 * v11);
}

std::size_t table_stride(const SampleAxis& ax, int dim) {
    return dim == 1 ? static_cast<std::size_t>(ax.points)
                    : static_cast<std::size_t>(ax.points) * ax.points;
}

}  // namespace

HamiltonianSpec HamiltonianSpec::make_quadratic(double kappa, Field potential) {
    HamiltonianSpec h;
    h.kind = HKind::quadratic;
    h.kappa = kappa;
    h.potential = std::move(potential);
    return h;
}

HamiltonianSpec HamiltonianSpec::make_tabulated(SampleAxis p_axis, int table_nodes,
                                                std::vector<double> values, int dim,
                                                double coercivity_margin) {
    HamiltonianSpec h;
    h.kind = HKind::tabulated;
    h.p_axis = p_axis;
    h.table_nodes = table_nodes;
    h.table = std::move(values);
    h.coercivity_margin = coercivity_margin;
    if (h.table.size() != table_nodes * table_stride(p_axis, dim))
        throw std::invalid_argument("HamiltonianSpec: table size mismatch");
    return h;
}

double HamiltonianSpec::eval(const TorusGrid& g, const Vec& x, const Vec& p) const {
    if (kind == HKind::quadratic)
        return 0.5 * kappa * norm2(p, g.dim) + torus_interp(g, potential, x);
    if (table_nodes == 1) return table_eval(p_axis, table.data(), g.dim, p);
    // x-dependent table: interpolate the per-node evaluations over x
    // (desk-scale tables are small; clarity over speed here).
    if (g.dim == 1) {
        int j; double f;
        detail::locate(g.n, x[0], j, f);
        const std::size_t st = table_stride(p_axis, g.dim);
        double a = table_eval(p_axis, table.data() + st * j, 1, p);
        double b = table_eval(p_axis, table.data() + st * ((j + 1) % g.n), 1, p);
        return a * (1 - f) + b * f;
    }
    int j0, j1; double f0, f1;
    detail::locate(g.n, x[0], j0, f0);
    detail::locate(g.n, x[1], j1, f1);
    const std::size_t st = table_stride(p_axis, g.dim);
    auto node_val = [&](int a, int b) {
        std::size_t idx = g.index(a, b);
        return table_eval(p_axis, table.data() + st * idx, 2, p);
    };
    return (1 - f0) * ((1 - f1) * node_val(j0, j1) + f1 * node_val(j0, j1 + 1)) +
           f0 * ((1 - f1) * node_val(j0 + 1, j1) + f1 * node_val(j0 + 1, j1 + 1));
}

double HamiltonianSpec::eval_at_node(const TorusGrid& g, std::size_t node, const Vec& p) const {
    if (kind == HKind::quadratic)
        return 0.5 * kappa * norm2(p, g.dim) + potential[node];
    const std::size_t st = table_stride(p_axis, g.dim);
    const double* row = table.data() + (table_nodes == 1 ? 0 : st * node);
    return table_eval(p_axis, row, g.dim, p);
}

double HamiltonianSpec::max_gradient(double p_bound) const {
    if (kind == HKind::quadratic) return kappa * p_bound;
    const double h = p_axis.spacing();
    const int np = p_axis.points;
    double mx = 0.0;
    // finite differences along the fastest axis cover dim 1; for dim 2 the
    // table is scanned along both axes below
    for (int node = 0; node < table_nodes; ++node) {
        const double* row = table.data() + static_cast<std::size_t>(node) * (table.size() / table_nodes);
        std::size_t len = table.size() / table_nodes;
        if (len == static_cast<std::size_t>(np)) {
            for (int j = 0; j + 1 < np; ++j)
                mx = std::max(mx, std::abs(row[j + 1] - row[j]) / h);
        } else {
            for (int a = 0; a < np; ++a)
                for (int b = 0; b + 1 < np; ++b) {
                    mx = std::max(mx, std::abs(row[a * np + b + 1] - row[a * np + b]) / h);
                    mx = std::max(mx, std::abs(row[(b + 1) * np + a] - row[b * np + a]) / h);
                }
        }
    }
    return mx;
}

double HamiltonianSpec::growth_constant() const {
    if (kind == HKind::quadratic) {
        double vmax = potential.empty() ? 0.0 : sup_norm(potential);
        return std::max({kappa, 1.0 / kappa, 2.0 * vmax, 1.0});
    }
    // Smallest C with |p|^2/(2C) - C <= H <= (C/2)(|p|^2+1) over the table.
    const int np = p_axis.points;
    const std::size_t st = table.size() / table_nodes;
    const bool two_d = st != static_cast<std::size_t>(np);
    double c = 1.0;
    for (int node = 0; node < table_nodes; ++node) {
        const double* row = table.data() + static_cast<std::size_t>(node) * st;
        for (std::size_t j = 0; j < st; ++j) {
            double p2;
            if (!two_d) {
                double p = p_axis.at(static_cast<int>(j));
                p2 = p * p;
            } else {
                double pa = p_axis.at(static_cast<int>(j) / np);
                double pb = p_axis.at(static_cast<int>(j) % np);
                p2 = pa * pa + pb * pb;
            }
            double hval = row[j];
            c = std::max(c, 2.0 * hval / (p2 + 1.0));
            c = std::max(c, 0.5 * (-hval + std::sqrt(hval * hval + 2.0 * p2)));
        }
    }
    return c;
}

void HamiltonianSpec::check_invariants(const TorusGrid& g) const {
    if (kind == HKind::quadratic) {
        if (!(kappa > 0.0)) throw std::invalid_argument("quadratic Hamiltonian: kappa must be positive");
        if (potential.size() != g.node_count())
            throw std::invalid_argument("quadratic Hamiltonian: potential not sampled on the grid");
        return;
    }
    if (p_axis.points < 3 || p_axis.points % 2 == 0)
        throw std::invalid_argument("tabulated Hamiltonian: p-grid needs an odd point count >= 3");
    if (!(p_axis.bound > 0.0)) throw std::invalid_argument("tabulated Hamiltonian: p bound must be positive");
    if (table_nodes != 1 && table_nodes != static_cast<int>(g.node_count()))
        throw std::invalid_argument("tabulated Hamiltonian: table must cover 1 or all grid nodes");

    const int np = p_axis.points;
    const std::size_t st = table.size() / table_nodes;
    const bool two_d = st != static_cast<std::size_t>(np);
    const double scale = std::max(1.0, sup_norm(table));
    const double tol = 1e-12 * scale;
    for (int node = 0; node < table_nodes; ++node) {
        const double* row = table.data() + static_cast<std::size_t>(node) * st;
        if (!two_d) {
            for (int j = 1; j + 1 < np; ++j) {
                double d2 = row[j + 1] - 2 * row[j] + row[j - 1];
                if (d2 < -tol)
                    throw std::invalid_argument("tabulated Hamiltonian: non-convex at node " +
                                                std::to_string(node) + ", p-index " + std::to_string(j));
            }
        } else {
            // axis-wise second differences only; cross-term convexity is not
            // checked for dim 2 tables (documented limitation)
            for (int a = 0; a < np; ++a)
                for (int b = 1; b + 1 < np; ++b) {
                    double d2r = row[a * np + b + 1] - 2 * row[a * np + b] + row[a * np + b - 1];
                    double d2c = row[(b + 1) * np + a] - 2 * row[b * np + a] + row[(b - 1) * np + a];
                    if (d2r < -tol || d2c < -tol)
                        throw std::invalid_argument("tabulated Hamiltonian: non-convex at node " +
                                                    std::to_string(node) + ", p-index (" +
                                                    std::to_string(a) + "," + std::to_string(b) + ")");
                }
        }
        // coercivity: the boundary samples must clear the center by the margin
        double center = !two_d ? row[(np - 1) / 2] : row[((np - 1) / 2) * np + (np - 1) / 2];
        double edge_min = std::numeric_limits<double>::infinity();
        if (!two_d) {
            edge_min = std::min(row[0], row[np - 1]);
        } else {
            for (int j = 0; j < np; ++j) {
                edge_min = std::min({edge_min, row[j], row[(np - 1) * np + j],
                                     row[j * np], row[j * np + np - 1]});
            }
        }
        if (edge_min < center + coercivity_margin)
            throw std::invalid_argument("tabulated Hamiltonian: not coercive at node " +
                                        std::to_string(node) + " (margin " +
                                        std::to_string(coercivity_margin) + " not met at p-bound)");
    }
}

double LagrangianSpec::eval(const TorusGrid& g, const Vec& x, const Vec& q) const {
    if (kind == HKind::quadratic)
        return 0.5 * norm2(q, g.dim) / kappa - torus_interp(g, potential, x);
    HamiltonianSpec view;  // reuse the table interpolation path
    view.kind = HKind::tabulated;
    view.p_axis = q_axis;
    view.table_nodes = table_nodes;
    view.table = table;
    return view.eval(g, x, q);
}

double LagrangianSpec::eval_at_node(const TorusGrid& g, std::size_t node, const Vec& q) const {
    if (kind == HKind::quadratic)
        return 0.5 * norm2(q, g.dim) / kappa - potential[node];
    const std::size_t st = table_stride(q_axis, g.dim);
    const double* row = table.data() + (table_nodes == 1 ? 0 : st * node);
    return table_eval(q_axis, row, g.dim, q);
}

namespace {

// Brute-force conjugate of one table row: out[j] = max_i (p_i . q_j - f[p_i]).
void conjugate_row(const SampleAxis& in, const double* f, const SampleAxis& out,
                   double* result, int dim) {
    const int ni = in.points, no = out.points;
    if (dim == 1) {
        for (int j = 0; j < no; ++j) {
            double q = out.at(j), best = -std::numeric_limits<double>::infinity();
            for (int i = 0; i < ni; ++i) best = std::max(best, in.at(i) * q - f[i]);
            result[j] = best;
        }
        return;
    }
    for (int j0 = 0; j0 < no; ++j0)
        for (int j1 = 0; j1 < no; ++j1) {
            double q0 = out.at(j0), q1 = out.at(j1);
            double best = -std::numeric_limits<double>::infinity();
            for (int i0 = 0; i0 < ni; ++i0)
                for (int i1 = 0; i1 < ni; ++i1)
                    best = std::max(best, in.at(i0) * q0 + in.at(i1) * q1 - f[i0 * ni + i1]);
            result[j0 * no + j1] = best;
        }
}

}  // namespace

LagrangianSpec legendre_transform(const HamiltonianSpec& h, const SampleAxis& q_axis,
                                  const TorusGrid& g) {
    h.check_invariants(g);
    LagrangianSpec l;
    if (h.kind == HKind::quadratic) {
        l.kind = HKind::quadratic;
        l.kappa = h.kappa;
        l.potential = h.potential;
        return l;
    }
    l.kind = HKind::tabulated;
    l.q_axis = q_axis;
    l.table_nodes = h.table_nodes;
    const std::size_t st_in = h.table.size() / h.table_nodes;
    const std::size_t st_out = table_stride(q_axis, g.dim);
    l.table.resize(h.table_nodes * st_out);
    for (int node = 0; node < h.table_nodes; ++node)
        conjugate_row(h.p_axis, h.table.data() + node * st_in, q_axis,
                      l.table.data() + node * st_out, g.dim);
    return l;
}

HamiltonianSpec legendre_transform_back(const LagrangianSpec& l, const SampleAxis& p_axis,
                                        const TorusGrid& g) {
    if (l.kind == HKind::quadratic) {
        return HamiltonianSpec::make_quadratic(l.kappa, l.potential);
    }
    HamiltonianSpec h;
    h.kind = HKind::tabulated;
    h.p_axis = p_axis;
    h.table_nodes = l.table_nodes;
    const std::size_t st_in = l.table.size() / l.table_nodes;
    const std::size_t st_out = table_stride(p_axis, g.dim);
    h.table.resize(l.table_nodes * st_out);
    for (int node = 0; node < l.table_nodes; ++node)
        conjugate_row(l.q_axis, l.table.data() + node * st_in, p_axis,
                      h.table.data() + node * st_out, g.dim);
    return h;
}

}  // namespace wchj
