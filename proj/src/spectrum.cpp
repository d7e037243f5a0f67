#include "xyz/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace xyz {

Spectrum::Spectrum(const Model& m, const GaugeFrame& f) : m_(m), f_(f), g_(m, f.alpha) {
    const int n = m.n();
    const cplx e = m.eta();
    auto bn = m.boundary_nodes();
    nodes_.assign(bn.begin(), bn.end());
    for (cplx x : m.params().xi) nodes_.push_back(x - e / 2.0);
    bvals_ = m.boundary_node_values();

    // Even Lagrange basis needs theta(x_a - x_b) theta(x_a + x_b) away from zero.
    for (std::size_t a = 0; a < nodes_.size(); ++a)
        for (std::size_t b = 0; b < a; ++b) {
            cplx d = m.th(nodes_[a] - nodes_[b]) * m.th(nodes_[a] + nodes_[b]);
            if (std::abs(d) < 1e-12) throw DegeneracyError("interpolation nodes coincide modulo the periods");
        }

    q_.resize(n);
    j1_.resize(n);
    l1_.resize(n, n);
    for (int k = 0; k < n; ++k) {
        const cplx z1 = sov_zeta(m, k, 1), z0 = sov_zeta(m, k, 0);
        q_[k] = a_hat(z1) * a_hat(-z0);
        q_scale_ = std::max(q_scale_, std::abs(q_[k]));
        j1_(k) = j(z1);
        for (int a = 0; a < n; ++a) l1_(k, a) = lagrange(4 + a, z1);
    }
}

cplx Spectrum::lagrange(int a, cplx x) const {
    const cplx xa = nodes_[a];
    cplx v = 1.0;
    for (std::size_t b = 0; b < nodes_.size(); ++b) {
        if (int(b) == a) continue;
        const cplx y = nodes_[b];
        v *= m_.th(x - y) * m_.th(x + y) / (m_.th(xa - y) * m_.th(xa + y));
    }
    return v;
}

cplx Spectrum::j(cplx x) const {
    cplx v = 0.0;
    for (int a = 0; a < 4; ++a) v += lagrange(a, x) * bvals_[a];
    return v;
}

cplx Spectrum::t_hat(cplx x, const Vec& xs) const {
    cplx v = j(x);
    for (int a = 0; a < n(); ++a) v += lagrange(4 + a, x) * xs(a);
    return v;
}

cplx Spectrum::t_hat_denominator(const Model& m, cplx x) {
    const cplx e = m.eta();
    return m.t(4, 2.0 * x + e) * m.t(4, 2.0 * x - e);
}

cplx Spectrum::t_fn(cplx x, const Vec& xs) const {
    cplx d = t_hat_denominator(m_, x);
    if (std::abs(d) < 1e-300) throw PoleError("t(lambda) evaluated at a boundary pole");
    return t_hat(x, xs) / d;
}

cplx Spectrum::a_coef(cplx x) const { return a_plus(m_, f_, x) * g_.a_scalar(x); }

cplx Spectrum::d_coef(int a) const {
    const cplx e = m_.eta(), xa = m_.params().xi[a];
    return d_plus(m_, f_, xa + e / 2.0) * sov_k(m_, a) * g_.a_scalar(e / 2.0 - xa);
}

cplx Spectrum::a_hat(cplx x) const { return t_hat_denominator(m_, x) * a_coef(x); }

Vec Spectrum::residual(const Vec& xs) const {
    Vec inner = j1_ + l1_ * xs;
    Vec r(n());
    for (int k = 0; k < n(); ++k) r(k) = xs(k) * inner(k) - q_[k];
    return r;
}

Mat Spectrum::jacobian(const Vec& xs) const {
    Vec inner = j1_ + l1_ * xs;
    Mat jac = xs.asDiagonal() * l1_;
    jac.diagonal() += inner;
    return jac;
}

double Spectrum::relative_residual(const Vec& xs) const {
    if (n() == 0) return 0.0;
    return residual(xs).cwiseAbs().maxCoeff() / q_scale_;
}

NewtonResult newton_solve(const Spectrum& sp, Vec x, int max_iter) {
    NewtonResult out;
    const double target = 1e-10;
    double res = sp.relative_residual(x);
    for (int it = 0; it < max_iter && res >= target; ++it) {
        out.iterations = it + 1;
        Eigen::PartialPivLU<Mat> lu(sp.jacobian(x));
        Vec step = lu.solve(sp.residual(x));
        if (!step.allFinite()) break;
        double t = 1.0;
        Vec trial = x - step;
        double tres = sp.relative_residual(trial);
        for (int h = 0; h < 20 && !(tres < res); ++h) {
            t *= 0.5;
            trial = x - t * step;
            tres = sp.relative_residual(trial);
        }
        if (!std::isfinite(tres)) break;
        x = trial;
        res = tres;
    }
    out.x = x;
    out.residual = res;
    out.converged = res < target;
    return out;
}

double x_distance(const Vec& a, const Vec& b) {
    if (a.size() == 0) return 0.0;
    double s = std::max({a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff(), 1e-300});
    return (a - b).cwiseAbs().maxCoeff() / s;
}

std::vector<Vec> oracle_x(const Spectrum& sp, const std::vector<Eigenpair>& oracle) {
    const Model& m = sp.model();
    std::vector<Mat> that;
    for (int k = 0; k < m.n(); ++k) that.push_back(m.transfer_hat(sov_zeta(m, k, 0)));
    std::vector<Vec> out;
    for (const auto& ep : oracle) {
        Vec x(m.n());
        cplx nrm = (ep.left * ep.right)(0, 0);
        for (int k = 0; k < m.n(); ++k) x(k) = (ep.left * that[k] * ep.right)(0, 0) / nrm;
        out.push_back(x);
    }
    return out;
}

namespace {

void add_unique(std::vector<SpectrumSolution>& sols, const NewtonResult& r, double dedup) {
    if (!r.converged) return;
    for (const auto& s : sols)
        if (x_distance(s.x, r.x) < dedup) return;
    sols.push_back({r.x, r.residual, -1, 0.0});
}

void sort_solutions(std::vector<SpectrumSolution>& sols) {
    std::sort(sols.begin(), sols.end(), [](const SpectrumSolution& a, const SpectrumSolution& b) {
        if (a.x.size() == 0) return false;
        if (a.x(0).real() != b.x(0).real()) return a.x(0).real() < b.x(0).real();
        return a.x(0).imag() < b.x(0).imag();
    });
}

}  // namespace

SolveReport solve_spectrum(const Spectrum& sp, const std::vector<Vec>& seeds, const SolveOptions& opt) {
    SolveReport rep;
    const int n = sp.n();
    rep.expected = 1 << n;
    if (n == 0) {
        rep.solutions.push_back({Vec(0), 0.0, -1, 0.0});
        rep.multistart.push_back({Vec(0), 0.0, -1, 0.0});
        return rep;
    }
    for (const Vec& s : seeds) add_unique(rep.solutions, newton_solve(sp, s), opt.dedup);

    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    const int budget = opt.multistart > 0 ? opt.multistart : 16 * rep.expected;
    for (const Vec& y : homotopy_solve(sp, opt.seed)) add_unique(rep.multistart, newton_solve(sp, y), opt.dedup);
    const double scale = std::sqrt(sp.q_scale());
    for (int k = 0; k < budget && int(rep.multistart.size()) < rep.expected; ++k) {
        Vec x0(n);
        for (int a = 0; a < n; ++a) x0(a) = cplx(nd(rng), nd(rng)) * scale;
        add_unique(rep.multistart, newton_solve(sp, x0, 200), opt.dedup);
    }
    sort_solutions(rep.solutions);
    sort_solutions(rep.multistart);
    return rep;
}

std::vector<Vec> homotopy_solve(const Spectrum& sp, std::uint64_t seed) {
    const int n = sp.n();
    std::vector<Vec> ends;
    if (n == 0) return ends;
    // Rescaled unknowns y = x / s and rows divided by |q_n|, so the target system is O(1).
    const double s = std::sqrt(sp.q_scale());
    Vec w(n);
    for (int k = 0; k < n; ++k) w(k) = 1.0 / std::max(std::abs(sp.q()[k]), 1e-300);
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
    const cplx gamma = std::polar(1.0, ang(rng));

    auto target = [&](const Vec& y) { return Vec(w.asDiagonal() * sp.residual(s * y)); };
    auto target_jac = [&](const Vec& y) { return Mat(w.asDiagonal() * sp.jacobian(s * y) * s); };
    auto h_of = [&](const Vec& y, double t) {
        Vec g = y.cwiseProduct(y) - Vec::Ones(n);
        return Vec((1.0 - t) * gamma * g + t * target(y));
    };
    auto hx_of = [&](const Vec& y, double t) {
        Mat j = t * target_jac(y);
        j.diagonal() += (1.0 - t) * gamma * 2.0 * y;
        return j;
    };
    auto ht_of = [&](const Vec& y) { return Vec(target(y) - gamma * (y.cwiseProduct(y) - Vec::Ones(n))); };

    for (int p = 0; p < (1 << n); ++p) {
        Vec y(n);
        for (int k = 0; k < n; ++k) y(k) = ((p >> k) & 1) ? -1.0 : 1.0;
        double t = 0.0, dt = 0.02;
        bool ok = true;
        while (t < 1.0 && ok) {
            const double step = std::min(dt, 1.0 - t);
            // Euler predictor along dy/dt = -H_y^{-1} H_t.
            Eigen::PartialPivLU<Mat> lu(hx_of(y, t));
            Vec dy = -lu.solve(ht_of(y));
            Vec yp = y + step * dy;
            const double t1 = t + step;
            bool conv = false;
            for (int it = 0; it < 6; ++it) {
                Vec corr = Eigen::PartialPivLU<Mat>(hx_of(yp, t1)).solve(h_of(yp, t1));
                yp -= corr;
                if (!corr.allFinite()) break;
                if (corr.norm() < 1e-10 * std::max(1.0, yp.norm())) {
                    conv = true;
                    break;
                }
            }
            if (conv && (yp - y).norm() < 0.3 * std::max(1.0, y.norm())) {
                y = yp;
                t = t1;
                dt = std::min(0.1, dt * 1.5);
            } else {
                dt *= 0.5;
                if (dt < 1e-9) ok = false;
            }
        }
        if (ok && y.allFinite()) ends.push_back(s * y);
    }
    return ends;
}

void pair_with_oracle(std::vector<SpectrumSolution>& sols, const std::vector<Vec>& oracle) {
    for (auto& s : sols) {
        s.oracle_index = -1;
        s.oracle_distance = 1e300;
        for (std::size_t i = 0; i < oracle.size(); ++i) {
            double d = x_distance(s.x, oracle[i]);
            if (d < s.oracle_distance) {
                s.oracle_distance = d;
                s.oracle_index = int(i);
            }
        }
    }
}

std::vector<cplx> right_q_ratios(const Spectrum& sp, const Vec& xs) {
    const Model& m = sp.model();
    std::vector<cplx> r(m.n());
    for (int a = 0; a < m.n(); ++a) {
        const cplx z0 = sov_zeta(m, a, 0);
        cplx den = sp.a_coef(-z0);
        if (std::abs(den) < 1e-300) throw DegeneracyError("right Q-ratio: a(-zeta^0) vanishes");
        r[a] = xs(a) / Spectrum::t_hat_denominator(m, z0) / den;
    }
    return r;
}

std::vector<cplx> left_q_ratios(const Spectrum& sp, const Vec& xs) {
    const Model& m = sp.model();
    std::vector<cplx> r(m.n());
    for (int a = 0; a < m.n(); ++a) {
        cplx t1 = sp.t_fn(sov_zeta(m, a, 1), xs);
        if (std::abs(t1) < 1e-300) throw DegeneracyError("left Q-ratio: t(zeta^1) vanishes");
        r[a] = sp.d_coef(a) / t1;
    }
    return r;
}

Vec right_eigenstate(const Spectrum& sp, const SovBasis& basis, const Vec& xs) {
    auto r = right_q_ratios(sp, xs);
    Vec v = Vec::Zero(basis.model().dim());
    for (int i = 0; i < basis.size(); ++i) {
        cplx c = basis.vdm(i);
        for (int a = 0; a < basis.n(); ++a)
            if ((i >> a) & 1) c *= r[a];
        v += c * basis.right(i);
    }
    return v;
}

RowVec left_eigenstate(const Spectrum& sp, const SovBasis& basis, const Vec& xs) {
    auto r = left_q_ratios(sp, xs);
    RowVec v = RowVec::Zero(basis.model().dim());
    for (int i = 0; i < basis.size(); ++i) {
        cplx c = basis.vdm(i);
        for (int a = 0; a < basis.n(); ++a)
            if ((i >> a) & 1) c *= r[a];
        v += c * basis.left(i);
    }
    return v;
}

}  // namespace xyz
