#include "wchj/ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wchj {

namespace {

double least_squares_slope(std::span<const double> t, std::span<const double> y, std::size_t lo,
                           std::size_t hi) {
    double n = 0, st = 0, sy = 0, stt = 0, sty = 0;
    for (std::size_t i = lo; i <= hi; ++i) {
        n += 1;
        st += t[i];
        sy += y[i];
        stt += t[i] * t[i];
        sty += t[i] * y[i];
    }
    double denom = n * stt - st * st;
    if (denom == 0.0) throw std::invalid_argument("slope: degenerate sample window");
    return (n * sty - st * sy) / denom;
}

}  // namespace

SlopeEstimate ergodic_constant_slope(const ValueField& vf, double T_long, double tol_c) {
    SlopeEstimate est;
    std::size_t n_end = vf.step_index(T_long);
    std::size_t half = vf.step_index(T_long / 2);
    std::size_t quarter = vf.step_index(0.75 * T_long);
    est.c = -least_squares_slope(vf.step_times, vf.mean[0], half, n_end);
    est.c_tail = -least_squares_slope(vf.step_times, vf.mean[0], quarter, n_end);
    est.spread = std::abs(est.c - est.c_tail);
    est.converged = est.spread <= tol_c;
    return est;
}

SlopeEstimate ergodic_constant_slope(const ProblemSpec& spec, const SchemeParams& params,
                                     double T_long) {
    if (T_long < 20.0)
        throw std::invalid_argument("ergodic_constant_slope: desk-scale default needs T_long >= 20");
    ProblemSpec run = spec;
    run.horizon = T_long;
    ValueField vf = solve(run, params);
    ProblemConstants pc = assemble_constants(spec);
    return ergodic_constant_slope(vf, T_long, pc.tol_c(spec.grid, params.dt));
}

namespace {

// LF residual of (E) plus the kink classification of v.
void fill_residuals(ErgodicSolution& es, const ProblemSpec& spec, const SchemeParams& params,
                    const ProblemConstants& pc) {
    const auto& g = spec.grid;
    const int m = spec.m();
    const double dx = g.spacing();
    const auto& theta = params.theta_lf.empty() ? pc.theta_lf : params.theta_lf;
    const std::size_t nn = g.node_count();

    es.residual.assign(m, Field(nn, 0.0));
    es.kink_mask.assign(m, std::vector<char>(nn, 0));
    std::size_t kinks = 0;

    for (int k = 0; k < m; ++k) {
        double thr = pc.kink_threshold(g, sup_norm(es.v[k]));
        std::vector<char> raw(nn, 0);
        for (std::size_t idx = 0; idx < nn; ++idx)
            raw[idx] = second_difference(g, es.v[k], idx) > thr ? 1 : 0;
        // dilate by one node so interpolation cells touching a kink are excluded
        for (std::size_t idx = 0; idx < nn; ++idx) {
            if (!raw[idx]) continue;
            ++kinks;
            if (g.dim == 1) {
                int j = static_cast<int>(idx);
                es.kink_mask[k][g.index(j - 1)] = es.kink_mask[k][idx] = es.kink_mask[k][g.index(j + 1)] = 1;
            } else {
                int a = static_cast<int>(idx) / g.n, b = static_cast<int>(idx) % g.n;
                es.kink_mask[k][idx] = 1;
                es.kink_mask[k][g.index(a - 1, b)] = es.kink_mask[k][g.index(a + 1, b)] = 1;
                es.kink_mask[k][g.index(a, b - 1)] = es.kink_mask[k][g.index(a, b + 1)] = 1;
            }
        }

        for (std::size_t idx = 0; idx < nn; ++idx) {
            Vec pbar{0.0, 0.0};
            double diss = 0.0;
            if (g.dim == 1) {
                int j = static_cast<int>(idx);
                double up = (es.v[k][g.index(j + 1)] - es.v[k][idx]) / dx;
                double um = (es.v[k][idx] - es.v[k][g.index(j - 1)]) / dx;
                pbar[0] = 0.5 * (up + um);
                diss = 0.5 * theta[k] * (up - um);
            } else {
                int a = static_cast<int>(idx) / g.n, b = static_cast<int>(idx) % g.n;
                double up0 = (es.v[k][g.index(a + 1, b)] - es.v[k][idx]) / dx;
                double um0 = (es.v[k][idx] - es.v[k][g.index(a - 1, b)]) / dx;
                double up1 = (es.v[k][g.index(a, b + 1)] - es.v[k][idx]) / dx;
                double um1 = (es.v[k][idx] - es.v[k][g.index(a, b - 1)]) / dx;
                pbar = {0.5 * (up0 + um0), 0.5 * (up1 + um1)};
                diss = 0.5 * theta[k] * ((up0 - um0) + (up1 - um1));
            }
            double coup = 0.0;
            for (int j = 0; j < m; ++j) coup += spec.coupling(k, j) * es.v[j][idx];
            es.residual[k][idx] =
                spec.hamiltonians[k].eval_at_node(g, idx, pbar) - diss + coup - es.c;
        }
    }

    es.kink_fraction = static_cast<double>(kinks) / static_cast<double>(nn * m);
    for (int k = 0; k < m; ++k)
        for (std::size_t idx = 0; idx < nn; ++idx) {
            double r = std::abs(es.residual[k][idx]);
            es.residual_max = std::max(es.residual_max, r);
            if (!es.kink_mask[k][idx]) es.residual_max_smooth = std::max(es.residual_max_smooth, r);
        }
    es.tol_e = pc.tol_e(g, params.dt);
}

}  // namespace

ErgodicSolution ergodic_functions(const ProblemSpec& spec, const SchemeParams& params,
                                  double tol_fix, int max_iterations) {
    require_valid(spec);
    ProblemConstants pc = assemble_constants(spec);
    SlKernel kernel(spec, params, pc);
    const int m = spec.m();
    const std::size_t nn = spec.grid.node_count();

    ErgodicSolution es;
    es.v.assign(m, Field(nn, 0.0));
    std::vector<Field> next;
    std::size_t hits = 0;
    double shift = 0.0;

    for (int it = 1; it <= max_iterations; ++it) {
        kernel.step(es.v, next, hits);
        shift = next[0][0];  // value of state 1 at the grid origin
        double change = 0.0;
        for (int k = 0; k < m; ++k) {
            for (std::size_t idx = 0; idx < nn; ++idx) {
                next[k][idx] -= shift;
                change = std::max(change, std::abs(next[k][idx] - es.v[k][idx]));
            }
        }
        es.v.swap(next);
        es.iterations = it;
        if (change < tol_fix) {
            es.converged = true;
            break;
        }
    }
    es.c = -shift / params.dt;
    fill_residuals(es, spec, params, pc);
    return es;
}

std::vector<double> convergence_ladder(double T_long, double dt) {
    std::vector<double> ladder;
    for (double t = 0.5; t < T_long; t *= 1.5) {
        double snapped = std::round(t / dt) * dt;
        if (snapped > 0 && snapped < T_long - 1e-9) ladder.push_back(snapped);
    }
    double two = std::round(2.0 / dt) * dt;
    if (two < T_long - 1e-9) ladder.push_back(two);
    ladder.push_back(T_long);
    std::sort(ladder.begin(), ladder.end());
    ladder.erase(std::unique(ladder.begin(), ladder.end(),
                             [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                 ladder.end());
    return ladder;
}

double discrete_drift(const ValueField& vf, double t_end) {
    std::size_t hi = vf.step_index(t_end);
    std::size_t lo = vf.step_index(t_end - 1.0);
    double dt_window = vf.step_times[hi] - vf.step_times[lo];
    return -(vf.mean[0][hi] - vf.mean[0][lo]) / dt_window;
}

ConvergenceAudit convergence_audit_from(const ValueField& vf, const ProblemSpec& spec,
                                        const SchemeParams& params, const ErgodicSolution& es,
                                        double T_long, double t_extract) {
    ProblemConstants pc = assemble_constants(spec);
    ConvergenceAudit audit;
    audit.t_extract = t_extract;
    audit.tol_conv = pc.tol_conv(spec.grid, params.dt);
    audit.c_used = discrete_drift(vf, t_extract);
    audit.c_rvi_gap = std::abs(audit.c_used - es.c);

    const auto& u_ext = vf.at_time(t_extract);
    const int m = vf.m;
    std::vector<Field> v_ref(m);
    for (int k = 0; k < m; ++k) {
        v_ref[k] = u_ext[k];
        for (double& x : v_ref[k]) x += audit.c_used * t_extract;
    }

    audit.t = convergence_ladder(T_long, params.dt);
    for (double t : audit.t) {
        const auto& u = vf.at_time(t);
        double d = 0.0;
        for (int k = 0; k < m; ++k) {
            for (std::size_t idx = 0; idx < v_ref[k].size(); ++idx)
                d = std::max(d, std::abs(u[k][idx] + audit.c_used * t - v_ref[k][idx]));
        }
        audit.d.push_back(d);
    }

    audit.decreasing_after_transient = true;
    for (std::size_t i = 0; i + 1 < audit.t.size(); ++i) {
        if (audit.t[i] < 2.0 - 1e-9) continue;
        if (audit.d[i + 1] > audit.d[i] * 1.05 + 1e-12) {
            audit.decreasing_after_transient = false;
            break;
        }
    }
    audit.d_final = audit.d.back();
    audit.passed = audit.decreasing_after_transient && audit.d_final <= audit.tol_conv;
    return audit;
}

ConvergenceAudit convergence_audit(const ProblemSpec& spec, const SchemeParams& params,
                                   const ErgodicSolution& es, double T_long) {
    double t_extract = T_long + std::max(5.0, T_long / 4.0);
    ProblemSpec run = spec;
    run.horizon = t_extract;
    SolveOptions opt;
    opt.snapshot_times = convergence_ladder(T_long, params.dt);
    opt.snapshot_times.push_back(t_extract);
    opt.snapshot_times.push_back(t_extract - 1.0);
    ValueField vf = solve(run, params, opt);
    return convergence_audit_from(vf, spec, params, es, T_long, t_extract);
}

}  // namespace wchj
