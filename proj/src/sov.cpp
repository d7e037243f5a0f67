#include "xyz/sov.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <limits>

namespace xyz {

std::array<cplx, 8> boundary_zeta(const Model& m) {
    const cplx e = m.eta(), pw = kPi * m.params().omega;
    std::array<cplx, 8> z{e / 2.0, (e - kPi) / 2.0, (e - pw) / 2.0, (e - kPi - pw) / 2.0};
    for (int a = 0; a < 4; ++a) z[a + 4] = z[a] + pw;
    return z;
}

cplx sov_zeta(const Model& m, int a, int h) {
    return m.params().xi[a] + (double(h) - 0.5) * m.eta();
}

cplx sov_eta(const Model& m, int a, int h) {
    const cplx z = sov_zeta(m, a, h);
    const auto& r = m.thetas().ratio();
    cplx t4 = theta(4, z, r), t2 = theta(2, z, r);
    if (std::abs(t2) < 1e-300) throw PoleError("separated coordinate at a zero of theta_2");
    return t4 * t4 / (t2 * t2);
}

cplx vandermonde(const Model& m, const HTuple& h) {
    cplx v = 1.0;
    for (int a = 0; a < h.n; ++a)
        for (int b = 0; b < a; ++b) v *= sov_eta(m, a, h.bit(a)) - sov_eta(m, b, h.bit(b));
    return v;
}

double sov_eta_gap(const Model& m) {
    std::vector<cplx> all;
    for (int a = 0; a < m.n(); ++a)
        for (int h = 0; h < 2; ++h) all.push_back(sov_eta(m, a, h));
    double gap = std::numeric_limits<double>::infinity();
    double scale = 0;
    for (auto x : all) scale = std::max(scale, std::abs(x));
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = 0; j < i; ++j) gap = std::min(gap, std::abs(all[i] - all[j]));
    return gap / std::max(scale, 1.0);
}

cplx sov_k(const Model& m, int a) {
    const cplx e = m.eta(), x = m.params().xi[a];
    const auto& r = m.thetas().ratio();
    cplx q = theta(2, x + e / 2.0, r) / theta(2, x - e / 2.0, r);
    return m.th(2.0 * x + e) / m.th(2.0 * x - e) * std::pow(q, 2 * (m.n() - 1));
}

cplx a_h(const Model& m, const HTuple& h, cplx l) {
    cplx v = 1.0;
    for (int n = 0; n < h.n; ++n) v *= m.th(l - sov_zeta(m, n, h.bit(n)));
    return v;
}

RowVec sov_left_unnormalized(const Gauge& g, cplx beta, const HTuple& h, const std::vector<int>& order) {
    const Model& m = g.model();
    const cplx e = m.eta();
    RowVec v = g.left_reference(beta);
    for (int n : order) {
        if (!h.bit(n)) continue;
        const cplx l = e / 2.0 - m.params().xi[n];
        v = (v * g.op(GenOp::A, l, beta + 2.0)) / g.a_scalar(l);
    }
    return v;
}

RowVec sov_left_unnormalized(const Gauge& g, cplx beta, const HTuple& h) {
    std::vector<int> order(h.n);
    for (int n = 0; n < h.n; ++n) order[n] = n;
    return sov_left_unnormalized(g, beta, h, order);
}

Vec sov_right_unnormalized(const Gauge& g, cplx beta, const HTuple& h) {
    const Model& m = g.model();
    const cplx e = m.eta();
    Vec v = g.right_reference(2.0 - beta);
    for (int n = 0; n < h.n; ++n) {
        if (h.bit(n)) continue;
        const cplx x = m.params().xi[n];
        v = g.op(GenOp::D, x + e / 2.0, beta) * v / (sov_k(m, n) * g.a_scalar(e / 2.0 - x));
    }
    return v;
}

cplx sov_norm(const Gauge& g, cplx beta) {
    const Model& m = g.model();
    HTuple one = HTuple::ones(m.n());
    cplx bil = (sov_left_unnormalized(g, beta - 2.0, one) * sov_right_unnormalized(g, beta, one))(0, 0);
    return std::sqrt(vandermonde(m, one) * bil);
}

cplx pseudo_eigenvalue_left(const Gauge& g, cplx beta, const HTuple& h, cplx l) {
    const Model& m = g.model();
    const cplx e = m.eta();
    const double n = m.n();
    cplx k12 = g.k_minus_gauged(l, beta, KMinusKind::plain)(0, 1);
    cplx sgn = (m.n() % 2) ? -1.0 : 1.0;
    return sgn * m.th((n + beta) * e) / m.th(beta * e) * m.t(4, 2.0 * l - e) *
           m.th(l + (g.alpha() + 0.5) * e) * k12 * a_h(m, h, l) * a_h(m, h, -l);
}

cplx pseudo_eigenvalue_right(const Gauge& g, cplx beta, const HTuple& h, cplx l) {
    const Model& m = g.model();
    const cplx e = m.eta();
    const double n = m.n();
    cplx k21 = g.k_minus_gauged(l, 2.0 - beta, KMinusKind::tilde)(1, 0);
    cplx sgn = (m.n() % 2) ? -1.0 : 1.0;
    return sgn * k21 * m.t(4, 2.0 * l - e) * m.th(l + (g.alpha() + 0.5) * e) * m.th(e * (beta - n)) /
           m.th(e * beta) * a_h(m, h, l) * a_h(m, h, -l);
}

double nondegeneracy_margin(const Gauge& g, cplx beta) {
    static const cplx probes[] = {{0.21, 0.07}, {-0.13, 0.17}, {0.34, -0.09}};
    double worst = std::numeric_limits<double>::infinity();
    for (cplx l : probes) {
        Mat2 kp = g.k_minus_gauged(l, beta, KMinusKind::plain);
        Mat2 kt = g.k_minus_gauged(l, -beta, KMinusKind::tilde);
        worst = std::min(worst, std::abs(kp(0, 1)) / std::max(kp.norm(), 1e-300));
        worst = std::min(worst, std::abs(kt(1, 0)) / std::max(kt.norm(), 1e-300));
    }
    return worst;
}

namespace {

struct RankInfo {
    int rank;
    double cond;
};

RankInfo rank_of(const Mat& a) {
    Eigen::JacobiSVD<Mat> svd(a);
    const auto& s = svd.singularValues();
    const double smax = s(0);
    int r = 0;
    for (int i = 0; i < s.size(); ++i)
        if (s(i) > 1e-10 * smax) ++r;
    double smin = s(s.size() - 1);
    return {r, smin > 0 ? smax / smin : std::numeric_limits<double>::infinity()};
}

bool finite(const Mat& a) { return a.allFinite(); }

}  // namespace

SovBasis::SovBasis(const Model& m, const GaugeFrame& f) : m_(m), f_(f), g_(m, f.alpha) {
    const int n = m.n(), dim = m.dim();
    const cplx beta = f.beta;

    if (sov_eta_gap(m) < 1e-9)
        throw DegeneracyError("separated coordinates coincide: the inhomogeneities violate the separation condition");
    if (nondegeneracy_margin(g_, beta) < 1e-10 || nondegeneracy_margin(g_, beta + 2.0) < 1e-10)
        throw DegeneracyError("gauged boundary matrix entry vanishes identically for this frame");

    left_.resize(dim);
    right_.resize(dim);
    vdm_.resize(dim);
    for (int i = 0; i < dim; ++i) {
        HTuple h{n, i};
        left_[i] = sov_left_unnormalized(g_, beta, h);
        right_[i] = sov_right_unnormalized(g_, beta + 2.0, h);
        vdm_[i] = vandermonde(m, h);
    }
    HTuple one = HTuple::ones(n);
    norm_ = std::sqrt(vdm_[one.index] * (left_[one.index] * right_[one.index])(0, 0));
    if (!std::isfinite(std::abs(norm_)) || std::abs(norm_) < 1e-300)
        throw DegeneracyError("SOV normalisation vanishes");

    ul_.resize(dim, dim);
    ur_.resize(dim, dim);
    for (int i = 0; i < dim; ++i) {
        left_[i] /= norm_;
        right_[i] /= norm_;
        ul_.row(i) = left_[i];
        ur_.col(i) = right_[i];
    }
    if (!finite(ul_) || !finite(ur_)) throw DegeneracyError("SOV basis contains non-finite entries");

    RankInfo rl = rank_of(ul_), rr = rank_of(ur_);
    rank_l_ = rl.rank;
    rank_r_ = rr.rank;
    cond_l_ = rl.cond;
    cond_r_ = rr.cond;
    if (rank_l_ < dim || rank_r_ < dim)
        throw DegeneracyError("SOV basis is rank deficient (rank " + std::to_string(std::min(rank_l_, rank_r_)) +
                              " of " + std::to_string(dim) + ")");
}

double SovBasis::mjj_residual() const {
    Mat o = overlaps();
    double worst = 0;
    for (int i = 0; i < size(); ++i) worst = std::max(worst, rel_diff(o(i, i) * vdm_[i], cplx(1.0)));
    return worst;
}

double SovBasis::offdiag_residual() const {
    Mat o = overlaps();
    double worst = 0;
    for (int i = 0; i < size(); ++i)
        for (int j = 0; j < size(); ++j) {
            if (i == j) continue;
            double scale = std::sqrt(std::abs(o(i, i)) * std::abs(o(j, j)));
            worst = std::max(worst, std::abs(o(i, j)) / scale);
        }
    return worst;
}

double SovBasis::identity_residual() const {
    Vec v(size());
    for (int i = 0; i < size(); ++i) v(i) = vdm_[i];
    Mat id = ur_ * v.asDiagonal() * ul_;
    return (id - Mat::Identity(size(), size())).norm() / std::sqrt(double(size()));
}

namespace {

// Shared structure of the A (left) and D (right) interpolation formulas.
template <class State, class Act, class Scal>
State interpolate(const Model& m, const std::vector<State>& states, int i, cplx l, cplx al, Act act, Scal scal) {
    const int n = m.n();
    const cplx e = m.eta();
    const HTuple h{n, i};
    const auto zm = boundary_zeta(m);
    cplx ssum = 0;
    for (auto z : zm) ssum += z;

    auto t1 = [&](cplx x) { return m.t(1, x); };
    const cplx ahl = a_h(m, h, l) * a_h(m, h, -l);
    State out = State::Zero(states[i].size());
    for (int a = 0; a < 8; ++a) {
        cplx cf = t1(al - l - (ssum - zm[a])) / t1(al - ssum) * ahl / (a_h(m, h, zm[a]) * a_h(m, h, -zm[a]));
        for (int c = 0; c < 8; ++c)
            if (c != a) cf *= t1(l - zm[c]) / t1(zm[a] - zm[c]);
        out += cf * act(states[i], zm[a]);
    }
    for (int a = 0; a < 2 * n; ++a) {
        const int k = a % n;
        const int phi = a < n ? 1 : -1;
        const int nk = h.bit(k) - phi;
        if (nk != 0 && nk != 1) continue;
        const cplx z = double(phi) * sov_zeta(m, k, h.bit(k));
        const cplx c = z + al / 2.0 - 2.0 * e;
        cplx kern = m.t(4, 2.0 * l - e) * t1(2.0 * l - e) / (m.t(4, 2.0 * z - e) * t1(2.0 * z - e)) *
                    m.th(l + z) / m.th(2.0 * z) * m.th(l - c) / m.th(z - c);
        for (int b = 0; b < n; ++b) {
            if (b == k) continue;
            const cplx zb = sov_zeta(m, b, h.bit(b));
            kern *= m.th(l - zb) * m.th(l + zb) / (m.th(z - zb) * m.th(z + zb));
        }
        out += kern * scal(k, phi, z) * states[h.flipped(k).index];
    }
    return out;
}

}  // namespace

RowVec SovBasis::interp_left_A(int i, cplx l) const {
    const cplx b2 = f_.beta + 2.0;
    auto act = [&](const RowVec& v, cplx x) -> RowVec { return v * g_.op(GenOp::A, x, b2); };
    auto scal = [&](int, int, cplx z) { return g_.a_scalar(z); };
    return interpolate(m_, left_, i, l, 2.0 * b2 * m_.eta(), act, scal);
}

Vec SovBasis::interp_right_D(int i, cplx l) const {
    const cplx b2 = f_.beta + 2.0;
    auto act = [&](const Vec& v, cplx x) -> Vec { return g_.op(GenOp::D, x, b2) * v; };
    auto scal = [&](int k, int phi, cplx z) {
        return std::pow(sov_k(m_, k), phi) * g_.a_scalar(z - 2.0 * double(phi) * m_.params().xi[k]);
    };
    return interpolate(m_, right_, i, l, 2.0 * (2.0 - b2) * m_.eta(), act, scal);
}

}  // namespace xyz
