#pragma once

#include <string>
#include <vector>

#include "wchj/grid.hpp"

namespace wchj {

enum class HKind { quadratic, tabulated };

/// Uniform symmetric sample axis [-bound, bound] with an odd point count.
struct SampleAxis {
    double bound = 0.0;
    int points = 0;

    double spacing() const { return points > 1 ? 2.0 * bound / (points - 1) : 0.0; }
    double at(int j) const { return -bound + j * spacing(); }
};

/// Hamiltonian H_i(x, p). Quadratic kind is kappa*|p|^2/2 + V(x) with V
/// sampled on the grid. Tabulated kind stores convex samples of H(x, .)
/// on a p-grid; a single table row means the Hamiltonian is x-independent.
struct HamiltonianSpec {
    HKind kind = HKind::quadratic;

    double kappa = 1.0;
    Field potential;

    SampleAxis p_axis;
    int table_nodes = 0;            // 1 (x-independent) or grid.node_count()
    std::vector<double> table;      // [node][p-multi-index], row-major in p
    double coercivity_margin = 1.0;

    static HamiltonianSpec make_quadratic(double kappa, Field potential);
    static HamiltonianSpec make_tabulated(SampleAxis p_axis, int table_nodes,
                                          std::vector<double> values, int dim,
                                          double coercivity_margin = 1.0);

    double eval(const TorusGrid& g, const Vec& x, const Vec& p) const;
    double eval_at_node(const TorusGrid& g, std::size_t node, const Vec& p) const;
    /// max |dH/dp| over the table (tabulated) or over |p| <= p_bound (quadratic).
    double max_gradient(double p_bound) const;
    /// Growth constant C of the quadratic sandwich (A4)-style bound.
    double growth_constant() const;

    /// Throws std::invalid_argument naming the violating (node, p-index) if the
    /// tabulated values are not convex along an axis, or not coercive.
    void check_invariants(const TorusGrid& g) const;
};

/// Lagrangian L_i(x, q), same storage shape as HamiltonianSpec.
/// Quadratic kind: L = |q|^2/(2 kappa) - V(x).
struct LagrangianSpec {
    HKind kind = HKind::quadratic;

    double kappa = 1.0;
    Field potential;

    SampleAxis q_axis;
    int table_nodes = 0;
    std::vector<double> table;

    double eval(const TorusGrid& g, const Vec& x, const Vec& q) const;
    double eval_at_node(const TorusGrid& g, std::size_t node, const Vec& q) const;
};

/// Fenchel-Legendre transform L(x,q) = sup_p (p.q - H(x,p)). The quadratic
/// kind conjugates in closed form; tabulated kinds take the max over the
/// sampled p-grid at each requested q.
LagrangianSpec legendre_transform(const HamiltonianSpec& h, const SampleAxis& q_axis,
                                  const TorusGrid& g);

/// Conjugate a tabulated Lagrangian back to a Hamiltonian table (used by the
/// double-transform consistency checks).
HamiltonianSpec legendre_transform_back(const LagrangianSpec& l, const SampleAxis& p_axis,
                                        const TorusGrid& g);

}  // namespace wchj
