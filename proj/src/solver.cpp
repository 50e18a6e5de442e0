#include "wchj/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>
#include <thread>

#include "wchj/weights.hpp"

namespace wchj {

StepWeights step_weights(const CouplingMatrix& coupling, double h) {
    StepWeights w;
    w.m = coupling.m;
    w.mid.resize(w.m);
    w.end.resize(w.m);
    for (int i = 0; i < w.m; ++i) {
        WeightSystem ws = weights_general(coupling, i + 1);
        w.mid[i] = ws.eval(-0.5 * h);
        w.end[i] = ws.eval(-h);
        for (auto* row : {&w.mid[i], &w.end[i]}) {
            double s = 0.0;
            for (double v : *row) s += v;
            for (double& v : *row) v /= s;
        }
    }
    return w;
}

struct SlKernel::Prepared {
    bool fast = false;
    double kin = 0.0;
    Field wpot, wterm;
    std::span<const Field> prev;
    std::span<const double> w_mid, w_end;
};

SlKernel::SlKernel(const ProblemSpec& spec, const SchemeParams& params, const ProblemConstants& pc)
    : spec_(spec), grid_(spec.grid), params_(params) {
    if (params_.q_samples < 3 || params_.q_samples % 2 == 0)
        throw std::invalid_argument("SchemeParams: q_samples must be odd and >= 3");
    q_box_ = params_.q_max > 0 ? params_.q_max : (spec.q_max > 0 ? spec.q_max : pc.q_max_default);
    w_ = step_weights(spec.coupling, params_.dt);
    for (const auto& h : spec.hamiltonians)
        all_quadratic_ = all_quadratic_ && h.kind == HKind::quadratic;
    if (!all_quadratic_) {
        SampleAxis q_axis{q_box_, 513};
        for (const auto& h : spec.hamiltonians)
            lagrangians_.push_back(legendre_transform(h, q_axis, grid_));
    }
}

SlKernel::Prepared SlKernel::prepare(std::span<const Field> prev, int state,
                                     std::span<const double> w_mid,
                                     std::span<const double> w_end) const {
    Prepared pr;
    pr.prev = prev;
    pr.w_mid = w_mid;
    pr.w_end = w_end;
    if (!all_quadratic_) return pr;
    pr.fast = true;
    const std::size_t nn = grid_.node_count();
    const int m = spec_.m();
    pr.wpot.assign(nn, 0.0);
    pr.wterm.assign(nn, 0.0);
    for (int k = 0; k < m; ++k) {
        pr.kin += w_mid[k] / spec_.hamiltonians[k].kappa;
        const double wm = w_mid[k], we = w_end[k];
        const Field& vk = spec_.hamiltonians[k].potential;
        const Field& uk = prev[k];
        for (std::size_t idx = 0; idx < nn; ++idx) {
            pr.wpot[idx] += wm * vk[idx];
            pr.wterm[idx] += we * uk[idx];
        }
    }
    (void)state;
    return pr;
}

namespace {
constexpr double kGolden = 0.6180339887498949;
}

NodeMin SlKernel::minimize_prepared(const Prepared& pr, const Vec& x, double h) const {
    const int dim = grid_.dim;
    const int K = params_.q_samples;
    const double Q = q_box_;
    const double dq = 2.0 * Q / (K - 1);
    const int gs_iters = 4 * params_.refine_rounds;
    const int m = static_cast<int>(pr.prev.size());

    auto f = [&](const Vec& q) {
        Vec mid{x[0] - 0.5 * h * q[0], x[1] - 0.5 * h * q[1]};
        Vec foot{x[0] - h * q[0], x[1] - h * q[1]};
        if (pr.fast) {
            double run = 0.5 * pr.kin * norm2(q, dim) - torus_interp(grid_, pr.wpot, mid);
            return h * run + torus_interp(grid_, pr.wterm, foot);
        }
        double run = 0.0, term = 0.0;
        for (int k = 0; k < m; ++k) {
            run += pr.w_mid[k] * lagrangians_[k].eval(grid_, mid, q);
            term += pr.w_end[k] * torus_interp(grid_, pr.prev[k], foot);
        }
        return h * run + term;
    };

    NodeMin best;
    best.value = std::numeric_limits<double>::infinity();
    std::array<int, 2> best_idx{0, 0};
    if (dim == 1) {
        for (int j = 0; j < K; ++j) {
            Vec q{-Q + j * dq, 0.0};
            double v = f(q);
            if (v < best.value) { best.value = v; best.q = q; best_idx[0] = j; }
        }
    } else {
        for (int j0 = 0; j0 < K; ++j0)
            for (int j1 = 0; j1 < K; ++j1) {
                Vec q{-Q + j0 * dq, -Q + j1 * dq};
                double v = f(q);
                if (v < best.value) { best.value = v; best.q = q; best_idx = {j0, j1}; }
            }
    }
    best.boundary = best_idx[0] == 0 || best_idx[0] == K - 1 ||
                    (dim > 1 && (best_idx[1] == 0 || best_idx[1] == K - 1));

    auto golden_axis = [&](int axis, int iters) {
        double lo = std::max(-Q, best.q[axis] - dq);
        double hi = std::min(Q, best.q[axis] + dq);
        Vec q = best.q;
        double x1 = hi - kGolden * (hi - lo), x2 = lo + kGolden * (hi - lo);
        q[axis] = x1;
        double f1 = f(q);
        q[axis] = x2;
        double f2 = f(q);
        for (int it = 0; it < iters; ++it) {
            if (f1 < f2) {
                hi = x2; x2 = x1; f2 = f1;
                x1 = hi - kGolden * (hi - lo);
                q[axis] = x1;
                f1 = f(q);
            } else {
                lo = x1; x1 = x2; f1 = f2;
                x2 = lo + kGolden * (hi - lo);
                q[axis] = x2;
                f2 = f(q);
            }
        }
        if (f1 < best.value) { best.value = f1; best.q[axis] = x1; }
        if (f2 < best.value) { best.value = f2; best.q[axis] = x2; }
    };

    if (dim == 1) {
        golden_axis(0, gs_iters);
    } else {
        for (int round = 0; round < params_.refine_rounds; ++round) {
            golden_axis(0, 4);
            golden_axis(1, 4);
        }
    }
    return best;
}

NodeMin SlKernel::minimize(std::span<const Field> prev, const Vec& x, int state,
                           std::span<const double> w_mid, std::span<const double> w_end,
                           double h) const {
    Prepared pr = prepare(prev, state, w_mid, w_end);
    return minimize_prepared(pr, x, h);
}

void SlKernel::step(const std::vector<Field>& prev, std::vector<Field>& next,
                    std::size_t& boundary_hits) const {
    const int m = spec_.m();
    const std::size_t nn = grid_.node_count();
    next.resize(m);

    std::vector<Prepared> prep(m);
    for (int i = 0; i < m; ++i) {
        prep[i] = prepare(prev, i, w_.mid[i], w_.end[i]);
        next[i].resize(nn);
    }

    auto run_range = [&](std::size_t lo, std::size_t hi, std::size_t& hits) {
        for (std::size_t idx = lo; idx < hi; ++idx) {
            Vec x = grid_.node(idx);
            for (int i = 0; i < m; ++i) {
                NodeMin nm = minimize_prepared(prep[i], x, params_.dt);
                next[i][idx] = nm.value;
                if (nm.boundary) ++hits;
            }
        }
    };

    if (params_.threads <= 1) {
        run_range(0, nn, boundary_hits);
        return;
    }
    const int nt = params_.threads;
    std::vector<std::size_t> hits(nt, 0);
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t) {
        std::size_t lo = nn * t / nt, hi = nn * (t + 1) / nt;
        pool.emplace_back([&, lo, hi, t] { run_range(lo, hi, hits[t]); });
    }
    for (auto& th : pool) th.join();
    for (auto hcount : hits) boundary_hits += hcount;
}

namespace {

std::set<std::size_t> snapshot_steps(const SolveOptions& opt, double dt, std::size_t n_steps) {
    std::set<std::size_t> keep{0, n_steps};
    for (double t : opt.snapshot_times) {
        auto idx = static_cast<std::size_t>(std::llround(t / dt));
        if (idx > n_steps || std::abs(idx * dt - t) > 1e-9)
            throw std::invalid_argument("snapshot time " + std::to_string(t) +
                                        " is not on the time lattice");
        keep.insert(idx);
    }
    if (opt.stride > 0)
        for (std::size_t s = 0; s <= n_steps; s += opt.stride) keep.insert(s);
    return keep;
}

}  // namespace

ValueField solve(const ProblemSpec& spec, const SchemeParams& params, const SolveOptions& opt) {
    require_valid(spec);
    ProblemConstants pc = assemble_constants(spec);
    SlKernel kernel(spec, params, pc);

    const double dt = params.dt;
    const auto n_steps = static_cast<std::size_t>(std::llround(spec.horizon / dt));
    if (std::abs(n_steps * dt - spec.horizon) > 1e-9)
        throw std::invalid_argument("solve: horizon is not an integer number of steps");

    ValueField vf;
    vf.grid = spec.grid;
    vf.m = spec.m();
    vf.mean.assign(vf.m, std::vector<double>(n_steps + 1, 0.0));
    vf.step_times.resize(n_steps + 1);

    auto keep = snapshot_steps(opt, dt, n_steps);

    std::vector<Field> u = spec.initial;
    std::vector<Field> u_next;
    std::size_t boundary_hits = 0;

    auto record = [&](std::size_t n, const std::vector<Field>& cur) {
        vf.step_times[n] = n * dt;
        for (int k = 0; k < vf.m; ++k) vf.mean[k][n] = mean(cur[k]);
        if (keep.count(n)) {
            vf.times.push_back(n * dt);
            vf.fields.push_back(cur);
        }
    };

    record(0, u);
    for (std::size_t n = 1; n <= n_steps; ++n) {
        kernel.step(u, u_next, boundary_hits);
        std::swap(u, u_next);
        record(n, u);
    }

    double evals = static_cast<double>(n_steps) * spec.grid.node_count() * vf.m;
    vf.boundary_hit_fraction = evals > 0 ? boundary_hits / evals : 0.0;
    if (vf.boundary_hit_fraction > 0.01)
        vf.warnings.push_back("velocity box boundary active at " +
                              std::to_string(100.0 * vf.boundary_hit_fraction) +
                              "% of node minimizations; Q_max is likely too small");
    return vf;
}

double lf_admissible_dt(const ProblemSpec& spec, const SchemeParams& params,
                        const ProblemConstants& pc, double dt_outer) {
    const auto& theta = params.theta_lf.empty() ? pc.theta_lf : params.theta_lf;
    double theta_max = *std::max_element(theta.begin(), theta.end());
    double rate = spec.grid.dim * theta_max / spec.grid.spacing() + spec.coupling.max_diagonal();
    double target = 0.45 / rate;
    auto refine = static_cast<std::size_t>(std::ceil(dt_outer / target));
    return dt_outer / static_cast<double>(refine);
}

ValueField solve_lf(const ProblemSpec& spec, const SchemeParams& params, const SolveOptions& opt) {
    require_valid(spec);
    ProblemConstants pc = assemble_constants(spec);
    const auto& theta = params.theta_lf.empty() ? pc.theta_lf : params.theta_lf;
    if (static_cast<int>(theta.size()) != spec.m())
        throw std::invalid_argument("solve_lf: need one theta per state");

    const auto& g = spec.grid;
    const double dt = params.dt, dx = g.spacing();
    double theta_max = *std::max_element(theta.begin(), theta.end());
    double cfl = dt * (g.dim * theta_max / dx + spec.coupling.max_diagonal());
    if (cfl > 0.5)
        throw std::invalid_argument("solve_lf: CFL violation, dt(theta/dx + c) = " +
                                    std::to_string(cfl) + " > 1/2");

    const auto n_steps = static_cast<std::size_t>(std::llround(spec.horizon / dt));
    if (std::abs(n_steps * dt - spec.horizon) > 1e-9)
        throw std::invalid_argument("solve_lf: horizon is not an integer number of steps");

    ValueField vf;
    vf.grid = g;
    vf.m = spec.m();
    vf.mean.assign(vf.m, std::vector<double>(n_steps + 1, 0.0));
    vf.step_times.resize(n_steps + 1);
    auto keep = snapshot_steps(opt, dt, n_steps);

    const int m = vf.m;
    const std::size_t nn = g.node_count();
    std::vector<Field> u = spec.initial;
    std::vector<Field> u_next(m, Field(nn));

    auto record = [&](std::size_t n, const std::vector<Field>& cur) {
        vf.step_times[n] = n * dt;
        for (int k = 0; k < m; ++k) vf.mean[k][n] = mean(cur[k]);
        if (keep.count(n)) {
            vf.times.push_back(n * dt);
            vf.fields.push_back(cur);
        }
    };

    record(0, u);
    for (std::size_t n = 1; n <= n_steps; ++n) {
        for (int k = 0; k < m; ++k) {
            const Field& uk = u[k];
            for (std::size_t idx = 0; idx < nn; ++idx) {
                Vec pbar{0.0, 0.0};
                double diss = 0.0;
                if (g.dim == 1) {
                    int j = static_cast<int>(idx);
                    double up = (uk[g.index(j + 1)] - uk[idx]) / dx;
                    double um = (uk[idx] - uk[g.index(j - 1)]) / dx;
                    pbar[0] = 0.5 * (up + um);
                    diss = 0.5 * theta[k] * (up - um);
                } else {
                    int a = static_cast<int>(idx) / g.n, b = static_cast<int>(idx) % g.n;
                    double up0 = (uk[g.index(a + 1, b)] - uk[idx]) / dx;
                    double um0 = (uk[idx] - uk[g.index(a - 1, b)]) / dx;
                    double up1 = (uk[g.index(a, b + 1)] - uk[idx]) / dx;
                    double um1 = (uk[idx] - uk[g.index(a, b - 1)]) / dx;
                    pbar = {0.5 * (up0 + um0), 0.5 * (up1 + um1)};
                    diss = 0.5 * theta[k] * ((up0 - um0) + (up1 - um1));
                }
                double ham = spec.hamiltonians[k].eval_at_node(g, idx, pbar) - diss;
                double coup = 0.0;
                for (int j = 0; j < m; ++j) coup += spec.coupling(k, j) * u[j][idx];
                u_next[k][idx] = uk[idx] - dt * (ham + coup);
            }
        }
        std::swap(u, u_next);
        record(n, u);
    }
    return vf;
}

WindowCheckReport dpp_window_check(const ValueField& vf, const ProblemSpec& spec,
                                   const SchemeParams& params, double h, double t, int n_probe,
                                   std::uint64_t seed) {
    if (!(h > 0.0) || h > t + 1e-12)
        throw std::invalid_argument("dpp_window_check: need 0 < h <= t");
    ProblemConstants pc = assemble_constants(spec);
    SlKernel kernel(spec, params, pc);
    StepWeights w = step_weights(spec.coupling, h);

    const auto& u_prev = vf.at_time(t - h);
    const auto& u_now = vf.at_time(t);

    WindowCheckReport rep;
    rep.h = h;
    rep.t = t;
    rep.n_probe = n_probe;

    std::mt19937_64 eng(seed);
    const std::size_t nn = spec.grid.node_count();
    for (int p = 0; p < n_probe; ++p) {
        std::size_t idx = eng() % nn;
        Vec x = spec.grid.node(idx);
        for (int i = 0; i < spec.m(); ++i) {
            NodeMin nm = kernel.minimize(u_prev, x, i, w.mid[i], w.end[i], h);
            double diff = nm.value - u_now[i][idx];
            rep.max_discrepancy = std::max(rep.max_discrepancy, std::abs(diff));
            rep.signed_min = std::min(rep.signed_min, diff);
        }
    }
    return rep;
}

}  // namespace wchj
