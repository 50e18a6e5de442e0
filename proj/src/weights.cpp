#include "wchj/weights.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wchj {

namespace {

constexpr double kCondLimit = 1e8;  // eigenvector matrix conditioning threshold

Eigen::MatrixXd to_eigen(const CouplingMatrix& c) {
    Eigen::MatrixXd M(c.m, c.m);
    for (int i = 0; i < c.m; ++i)
        for (int j = 0; j < c.m; ++j) M(i, j) = c(i, j);
    return M;
}

double inf_norm(const Eigen::MatrixXcd& M) {
    double mx = 0.0;
    for (int i = 0; i < M.rows(); ++i) {
        double s = 0.0;
        for (int j = 0; j < M.cols(); ++j) s += std::abs(M(i, j));
        mx = std::max(mx, s);
    }
    return mx;
}

struct SpectralData {
    std::vector<std::complex<double>> nonzero_eigs;
    int zero_index = -1;
    Eigen::MatrixXcd R, Rinv;
    double cond = 0.0;
    std::string violation;  // empty when the premise holds
};

SpectralData analyze(const CouplingMatrix& c) {
    SpectralData out;
    Eigen::MatrixXd M = to_eigen(c);
    double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
    Eigen::EigenSolver<Eigen::MatrixXd> es(M);
    if (es.info() != Eigen::Success) {
        out.violation = "eigenvalue computation failed";
        return out;
    }
    auto lam = es.eigenvalues();
    const double zero_tol = 1e-9 * scale;
    int zero_count = 0;
    for (int l = 0; l < c.m; ++l) {
        if (std::abs(lam(l)) < zero_tol) {
            ++zero_count;
            out.zero_index = l;
        }
    }
    if (zero_count == 0) {
        out.violation = "coupling matrix has no zero eigenvalue";
        return out;
    }
    if (zero_count > 1) {
        out.violation = "zero eigenvalue of the coupling matrix is not simple";
        return out;
    }
    for (int l = 0; l < c.m; ++l) {
        if (l == out.zero_index) continue;
        if (lam(l).real() <= 1e-12 * scale) {
            out.violation = "nonzero eigenvalue with non-positive real part: (" +
                            std::to_string(lam(l).real()) + ", " + std::to_string(lam(l).imag()) + ")";
            return out;
        }
        out.nonzero_eigs.push_back(lam(l));
    }
    out.R = es.eigenvectors();
    out.Rinv = out.R.inverse();
    out.cond = inf_norm(out.R) * inf_norm(out.Rinv);
    return out;
}

std::vector<double> unit_vector(int m, int i) {
    std::vector<double> v(m, 0.0);
    v[i] = 1.0;
    return v;
}

}  // namespace

std::optional<std::string> spectral_premise_violation(const CouplingMatrix& coupling) {
    SpectralData sd = analyze(coupling);
    if (sd.violation.empty()) return std::nullopt;
    return sd.violation;
}

WeightSystem weights_two_state(double c1, double c2, int start_state_1based) {
    if (!(c1 > 0.0) || !(c2 > 0.0))
        throw std::invalid_argument("weights_two_state: switching rates must be positive");
    if (start_state_1based != 1 && start_state_1based != 2)
        throw std::invalid_argument("weights_two_state: start state must be 1 or 2");
    WeightSystem w;
    w.m = 2;
    w.start_state = start_state_1based - 1;
    w.closed_form = true;
    w.rate_start = start_state_1based == 1 ? c1 : c2;
    w.rate_other = start_state_1based == 1 ? c2 : c1;
    double sum = c1 + c2;
    w.equilibrium = {0.0, 0.0};
    w.equilibrium[w.start_state] = w.rate_other / sum;
    w.equilibrium[1 - w.start_state] = w.rate_start / sum;
    w.eigenvalues = {std::complex<double>(sum, 0.0)};
    w.a.assign(2, std::vector<std::complex<double>>(1));
    w.a[w.start_state][0] = w.rate_start / sum;
    w.a[1 - w.start_state][0] = -w.rate_start / sum;
    w.spectral = true;
    return w;
}

std::vector<double> WeightSystem::eval(double s) const {
    if (s > 0.0) throw std::invalid_argument("WeightSystem::eval: s must be <= 0");
    if (s == 0.0) return unit_vector(m, start_state);
    if (closed_form) {
        double sum = rate_start + rate_other;
        double e = std::exp(sum * s);
        std::vector<double> phi(2);
        phi[start_state] = (rate_other + rate_start * e) / sum;
        phi[1 - start_state] = rate_start * (1.0 - e) / sum;
        return phi;
    }
    if (spectral) {
        std::vector<double> phi(m);
        for (int k = 0; k < m; ++k) {
            std::complex<double> acc(0.0, 0.0);
            for (std::size_t l = 0; l < eigenvalues.size(); ++l)
                acc += a[k][l] * std::exp(eigenvalues[l] * s);
            phi[k] = equilibrium[k] + acc.real();
        }
        return phi;
    }
    return eval_many(std::array<double, 1>{s}).front();
}

std::vector<std::vector<double>> WeightSystem::eval_many(std::span<const double> s) const {
    std::vector<std::vector<double>> out;
    out.reserve(s.size());
    if (closed_form || spectral) {
        for (double v : s) out.push_back(eval(v));
        return out;
    }
    // ODE fallback: implicit midpoint on phi' = C^T phi, integrated backward
    // from 0 through the (descending) requested samples.
    for (std::size_t k = 1; k < s.size(); ++k)
        if (s[k] > s[k - 1])
            throw std::invalid_argument("WeightSystem::eval_many: samples must be sorted descending");
    Eigen::MatrixXd A = to_eigen(coupling).transpose();
    const int n = coupling.m;
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    const double h = ode_step;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_full((I + 0.5 * h * A).eval());
    Eigen::MatrixXd rhs_full = I - 0.5 * h * A;

    Eigen::VectorXd phi = Eigen::VectorXd::Zero(n);
    phi(start_state) = 1.0;
    double cur = 0.0;
    for (double target : s) {
        while (cur - target > 1e-15) {
            double step = std::min(h, cur - target);
            if (step >= h - 1e-15) {
                phi = lu_full.solve(rhs_full * phi);
                cur -= h;
            } else {
                Eigen::PartialPivLU<Eigen::MatrixXd> lu((I + 0.5 * step * A).eval());
                phi = lu.solve((I - 0.5 * step * A) * phi);
                cur = target;
            }
        }
        std::vector<double> row(n);
        for (int k = 0; k < n; ++k) row[k] = phi(k);
        if (target == 0.0) row = unit_vector(n, start_state);
        out.push_back(std::move(row));
    }
    return out;
}

double WeightSystem::decay_rate() const {
    double r = std::numeric_limits<double>::infinity();
    for (const auto& lam : eigenvalues) r = std::min(r, lam.real());
    return r;
}

double WeightSystem::coeff_scale(int k) const {
    if (!spectral) return 1.0;  // crude bound |phi_k - eq| <= 1
    double s = 0.0;
    for (const auto& c : a[k]) s += std::abs(c);
    return s;
}

double WeightSystem::gap_tail_bound(int i, int j, double S) const {
    if (i == j) return 0.0;
    if (spectral) {
        double bound = 0.0;
        for (std::size_t l = 0; l < eigenvalues.size(); ++l) {
            double re = eigenvalues[l].real();
            bound += std::abs(a[i][l] - a[j][l]) * std::exp(-re * S) / re;
        }
        return bound;
    }
    double lam = decay_rate();
    auto phi = const_cast<WeightSystem*>(this)->eval(-S);
    double gap = std::abs(phi[i] - phi[j]);
    return 2.0 * gap / lam;
}

WeightSystem weights_general(const CouplingMatrix& coupling, int start_state_1based) {
    if (start_state_1based < 1 || start_state_1based > coupling.m)
        throw std::invalid_argument("weights_general: start state out of range");
    if (auto w = irreducibility_witness(coupling))
        throw std::invalid_argument("weights_general: coupling not irreducible, isolated subset " +
                                    subset_to_string(*w));
    SpectralData sd = analyze(coupling);
    if (!sd.violation.empty()) throw std::invalid_argument("weights_general: " + sd.violation);

    WeightSystem w;
    w.m = coupling.m;
    w.start_state = start_state_1based - 1;
    w.coupling = coupling;
    w.eigenvalues = sd.nonzero_eigs;
    if (sd.cond > kCondLimit) {
        w.spectral = false;  // defective or near-defective: integrate the ODE
        return w;
    }
    w.spectral = true;
    // phi^{(i)}(s) = row i of exp(C s) = sum_l R(i,l) e^{lambda_l s} Rinv(l,k)
    const int i = w.start_state;
    w.equilibrium.resize(w.m);
    for (int k = 0; k < w.m; ++k)
        w.equilibrium[k] = (sd.R(i, sd.zero_index) * sd.Rinv(sd.zero_index, k)).real();
    w.a.assign(w.m, std::vector<std::complex<double>>());
    for (int k = 0; k < w.m; ++k) {
        for (int l = 0; l < coupling.m; ++l) {
            if (l == sd.zero_index) continue;
            w.a[k].push_back(sd.R(i, l) * sd.Rinv(l, k));
        }
    }
    return w;
}

namespace testing {
WeightSystem weights_general_ode(const CouplingMatrix& coupling, int start_state_1based) {
    WeightSystem w = weights_general(coupling, start_state_1based);
    w.spectral = false;
    w.a.clear();
    return w;
}
}  // namespace testing

GapIntegral weight_gap_integral(const WeightSystem& w, int i_1based, int j_1based) {
    if (i_1based < 1 || i_1based > w.m || j_1based < 1 || j_1based > w.m)
        throw std::invalid_argument("weight_gap_integral: index out of range");
    GapIntegral out;
    const int i = i_1based - 1, j = j_1based - 1;
    if (i == j) return out;

    double S = 5.0;
    while (w.gap_tail_bound(i, j, S) >= 1e-8) {
        S *= 1.5;
        if (S > 2000.0)
            throw std::runtime_error("weight_gap_integral: no usable truncation horizon");
    }
    out.horizon = S;
    out.truncation_bound = w.gap_tail_bound(i, j, S);

    auto integrate = [&](std::size_t panels) {
        std::vector<double> s(panels + 1);
        for (std::size_t k = 0; k <= panels; ++k)
            s[k] = -S * static_cast<double>(k) / static_cast<double>(panels);
        auto phi = w.eval_many(s);
        double acc = 0.0;
        for (std::size_t k = 0; k < panels; ++k) {
            double f0 = std::abs(phi[k][i] - phi[k][j]);
            double f1 = std::abs(phi[k + 1][i] - phi[k + 1][j]);
            acc += 0.5 * (f0 + f1);
        }
        return acc * (S / static_cast<double>(panels));
    };

    std::size_t panels = 1 << 12;
    double prev = integrate(panels);
    for (;;) {
        panels *= 2;
        double cur = integrate(panels);
        if (std::abs(cur - prev) < 5e-10 || panels >= (1u << 21)) {
            out.value = cur;
            out.panels = panels;
            return out;
        }
        prev = cur;
    }
}

}  // namespace wchj
