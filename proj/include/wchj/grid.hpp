#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace wchj {

/// Point or velocity on the torus / in R^dim. Only the first `dim` entries
/// of the array are meaningful; the rest stay zero.
using Vec = std::array<double, 2>;

inline Vec make_vec(double x0, double x1 = 0.0) { return {x0, x1}; }

inline double dot(const Vec& a, const Vec& b, int dim) {
    double s = a[0] * b[0];
    if (dim > 1) s += a[1] * b[1];
    return s;
}

inline double norm2(const Vec& a, int dim) { return dot(a, a, dim); }

/// Uniform periodic grid on the unit torus [0,1)^dim.
struct TorusGrid {
    int dim = 1;
    int n = 0;  // points per axis

    TorusGrid() = default;
    TorusGrid(int dim_, int n_) : dim(dim_), n(n_) {
        if (dim < 1 || dim > 2) throw std::invalid_argument("TorusGrid: dim must be 1 or 2");
        if (n < 4) throw std::invalid_argument("TorusGrid: need at least 4 points per axis");
    }

    double spacing() const { return 1.0 / n; }

    std::size_t node_count() const {
        std::size_t c = static_cast<std::size_t>(n);
        return dim == 1 ? c : c * c;
    }

    std::size_t index(int i0, int i1 = 0) const {
        int a = wrap(i0), b = wrap(i1);
        return dim == 1 ? static_cast<std::size_t>(a)
                        : static_cast<std::size_t>(a) * n + b;
    }

    int wrap(int i) const {
        int r = i % n;
        return r < 0 ? r + n : r;
    }

    Vec node(std::size_t idx) const {
        if (dim == 1) return {static_cast<double>(idx) / n, 0.0};
        return {static_cast<double>(idx / n) / n, static_cast<double>(idx % n) / n};
    }

    bool same_shape(const TorusGrid& o) const { return dim == o.dim && n == o.n; }
};

/// Grid-sampled scalar field, flat row-major storage of size grid.node_count().
using Field = std::vector<double>;

namespace detail {
inline void locate(int n, double y, int& j, double& f) {
    double t = (y - std::floor(y)) * n;  // in [0, n]
    j = static_cast<int>(t);
    f = t - j;
    if (j >= n) { j -= n; }  // t == n from rounding
}
}  // namespace detail

/// Periodic multilinear interpolation of `u` at point `y` (any real coords).
inline double torus_interp(const TorusGrid& g, std::span<const double> u, const Vec& y) {
    int j0, j1 = 0;
    double f0, f1 = 0.0;
    detail::locate(g.n, y[0], j0, f0);
    if (g.dim == 1) {
        int j0n = j0 + 1 == g.n ? 0 : j0 + 1;
        return u[j0] * (1.0 - f0) + u[j0n] * f0;
    }
    detail::locate(g.n, y[1], j1, f1);
    int j0n = j0 + 1 == g.n ? 0 : j0 + 1;
    int j1n = j1 + 1 == g.n ? 0 : j1 + 1;
    const double* base = u.data();
    double v00 = base[static_cast<std::size_t>(j0) * g.n + j1];
    double v01 = base[static_cast<std::size_t>(j0) * g.n + j1n];
    double v10 = base[static_cast<std::size_t>(j0n) * g.n + j1];
    double v11 = base[static_cast<std::size_t>(j0n) * g.n + j1n];
    return (1 - f0) * ((1 - f1) * v00 + f1 * v01) + f0 * ((1 - f1) * v10 + f1 * v11);
}

/// Centered-difference gradient of `u` at grid node `idx`.
inline Vec centered_gradient(const TorusGrid& g, std::span<const double> u, std::size_t idx) {
    Vec p{0.0, 0.0};
    double inv2h = 0.5 * g.n;
    if (g.dim == 1) {
        int j = static_cast<int>(idx);
        p[0] = (u[g.index(j + 1)] - u[g.index(j - 1)]) * inv2h;
    } else {
        int a = static_cast<int>(idx) / g.n, b = static_cast<int>(idx) % g.n;
        p[0] = (u[g.index(a + 1, b)] - u[g.index(a - 1, b)]) * inv2h;
        p[1] = (u[g.index(a, b + 1)] - u[g.index(a, b - 1)]) * inv2h;
    }
    return p;
}

/// Undivided second difference along each axis, max over axes.
inline double second_difference(const TorusGrid& g, std::span<const double> u, std::size_t idx) {
    if (g.dim == 1) {
        int j = static_cast<int>(idx);
        return std::abs(u[g.index(j + 1)] - 2.0 * u[idx] + u[g.index(j - 1)]);
    }
    int a = static_cast<int>(idx) / g.n, b = static_cast<int>(idx) % g.n;
    double d0 = std::abs(u[g.index(a + 1, b)] - 2.0 * u[idx] + u[g.index(a - 1, b)]);
    double d1 = std::abs(u[g.index(a, b + 1)] - 2.0 * u[idx] + u[g.index(a, b - 1)]);
    return d0 > d1 ? d0 : d1;
}

inline double sup_norm(std::span<const double> u) {
    double m = 0.0;
    for (double v : u) m = std::max(m, std::abs(v));
    return m;
}

inline double sup_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double mean(std::span<const double> u) {
    double s = 0.0;
    for (double v : u) s += v;
    return s / static_cast<double>(u.size());
}

}  // namespace wchj
