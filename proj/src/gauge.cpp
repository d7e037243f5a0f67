#include "xyz/gauge.hpp"

#include <cmath>
#include <random>

namespace xyz {

Gauge::Gauge(const Model& m, cplx alpha) : m_(m), alpha_(alpha) {}

Vec2 Gauge::X(cplx b, cplx l) const {
    cplx z = l + (alpha_ + b) * m_.eta();
    return Vec2(m_.t(2, z), m_.t(3, z));
}

Row2 Gauge::Xbar(cplx b, cplx l) const {
    const cplx e = m_.eta();
    cplx z = l + (alpha_ + b) * e;
    return Row2(m_.t(3, z), -m_.t(2, z)) / (m_.th(l + alpha_ * e) * m_.th(b * e));
}

Row2 Gauge::Ybar(cplx b, cplx l) const {
    const cplx e = m_.eta();
    cplx z = l + (alpha_ - b) * e;
    return Row2(-m_.t(3, z), m_.t(2, z)) / (m_.th(l + alpha_ * e) * m_.th(b * e));
}

Row2 Gauge::Xtil(cplx b, cplx l) const {
    const cplx e = m_.eta();
    cplx f = m_.th(l + alpha_ * e) * m_.th(b * e) / (m_.th(l + (alpha_ + 1.0) * e) * m_.th((b - 1.0) * e));
    return f * Xbar(b, l);
}

Row2 Gauge::Ytil(cplx b, cplx l) const {
    const cplx e = m_.eta();
    cplx f = m_.th(l + alpha_ * e) * m_.th(b * e) / (m_.th(l + (alpha_ + 1.0) * e) * m_.th((b + 1.0) * e));
    return f * Ybar(b, l);
}

Vec2 Gauge::Yhat(cplx bb, cplx l) const {
    const cplx e = m_.eta();
    return m_.th((bb + 3.0) * e) * Y(bb, l) /
           (m_.th((bb + 2.0) * e) * m_.th(l + (alpha_ + 2.0) * e) * m_.t(4, 2.0 * l));
}

Vec2 Gauge::Xhat(cplx bb, cplx l) const {
    const cplx e = m_.eta();
    return m_.th((bb - 3.0) * e) * X(bb, l) /
           (m_.th((bb - 2.0) * e) * m_.th(l + (alpha_ + 2.0) * e) * m_.t(4, 2.0 * l));
}

Row2 Gauge::Yund(cplx b, cplx l) const {
    return Ybar(b, l) / (m_.t(4, 2.0 * l) * m_.th(-l + (alpha_ + 1.0) * m_.eta()));
}

Row2 Gauge::Xund(cplx b, cplx l) const {
    return Xbar(b, l) / (m_.t(4, 2.0 * l) * m_.th(-l + (alpha_ + 1.0) * m_.eta()));
}

Mat4 Gauge::dynamical_r(cplx l, cplx b) const {
    const cplx e = m_.eta();
    auto bb = [&](cplx s) { return m_.th(l) * m_.th((s + 1.0) * e) / m_.th(s * e); };
    auto cc = [&](cplx s) { return m_.th(e) * m_.th(s * e + l) / m_.th(s * e); };
    Mat4 r = Mat4::Zero();
    r(0, 0) = r(3, 3) = m_.th(l + e);
    r(1, 1) = bb(b);
    r(1, 2) = cc(b);
    r(2, 1) = cc(-b);
    r(2, 2) = bb(-b);
    return r;
}

cplx Gauge::r_fn(cplx l) const {
    const cplx e = m_.eta();
    return m_.t(4, 2.0 * l - e) * m_.th(l + (alpha_ + 0.5) * e);
}

Mat Gauge::contract(const Row2& co, const Mat& u, const Vec2& v) const {
    AuxBlocks b = split_aux(u);
    return co(0) * (b.A * v(0) + b.B * v(1)) + co(1) * (b.C * v(0) + b.D * v(1));
}

Mat Gauge::slot(GenOp which, cplx l, cplx b, const Mat& u) const {
    const cplx e = m_.eta(), lo = l - e / 2.0, hi = e / 2.0 - l;
    switch (which) {
        case GenOp::A:
            return contract(Ytil(b - 3.0, lo), u, X(b - 1.0, hi));
        case GenOp::B:
            return contract(Ytil(b - 1.0, lo), u, Y(b - 1.0, hi));
        case GenOp::C:
            return contract(Xtil(b - 1.0, lo), u, X(b - 1.0, hi));
        case GenOp::D:
            return contract(Xtil(b + 1.0, lo), u, Y(b - 1.0, hi));
    }
    throw ParameterError("gauge: unknown generator");
}

Mat Gauge::op(GenOp which, cplx l, cplx b) const {
    // theta_4(2l - eta) sits inside the regularised U_-, so no K_- pole is evaluated.
    cplx f = m_.th(l + (alpha_ + 0.5) * m_.eta());
    return f * slot(which, l, b, m_.u_minus_reg(l));
}

Mat Gauge::op_raw(GenOp which, cplx l, cplx b) const { return slot(which, l, b, m_.u_minus(l)); }

Gauge::Bulk Gauge::bulk(cplx l, cplx b) const {
    const cplx e = m_.eta();
    const double n = m_.n();
    Bulk out;
    Mat mo = m_.monodromy(l);
    cplx u = l - e / 2.0;
    Row2 gi[2] = {Ytil(b - 1.0, u), Xtil(b + 1.0, u)};
    Vec2 gr[2] = {X(b + n + 1.0, u), Y(b + n - 1.0, u)};
    Mat mh = m_.hat_monodromy(l);
    cplx w = e / 2.0 - l;
    Row2 gi2[2] = {Ybar(b + n, w), Xbar(b + n, w)};
    Vec2 gr2[2] = {X(b, w), Y(b, w)};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            out.M[i][j] = contract(gi[i], mo, gr[j]);
            out.Mbar[i][j] = contract(gi2[i], mh, gr2[j]);
        }
    return out;
}

KPlusLR Gauge::k_plus_lr(cplx l, cplx b) const {
    const cplx e = m_.eta(), u = e / 2.0 - l, v = l - e / 2.0;
    Mat2 k = m_.k_plus(l);
    KPlusLR o;
    o.L(0, 0) = Ytil(b - 1.0, u) * k * Xhat(b + 3.0, v);
    o.L(0, 1) = Ytil(b + 1.0, u) * k * Yhat(b - 1.0, v);
    o.L(1, 0) = Xtil(b + 1.0, u) * k * Xhat(b + 3.0, v);
    o.L(1, 1) = Xtil(b + 3.0, u) * k * Yhat(b - 1.0, v);
    o.R(0, 0) = Yund(b + 1.0, u) * k * X(b + 1.0, v);
    o.R(0, 1) = Yund(b + 1.0, u) * k * Y(b - 1.0, v);
    o.R(1, 0) = Xund(b + 1.0, u) * k * X(b + 3.0, v);
    o.R(1, 1) = Xund(b + 1.0, u) * k * Y(b + 1.0, v);
    return o;
}

Mat2 Gauge::k_minus_gauged(cplx l, cplx b, KMinusKind kind) const {
    const cplx e = m_.eta(), u = l - e / 2.0, w = e / 2.0 - l;
    const double n = m_.n();
    Mat2 k = m_.k_minus(l);
    Row2 rows[2];
    if (kind == KMinusKind::plain) {
        rows[0] = Ytil(b + n - 1.0, u);
        rows[1] = Xtil(b + n + 1.0, u);
    } else {
        rows[0] = Ytil(b + n - 3.0, u);
        rows[1] = Xtil(b + n - 1.0, u);
    }
    Vec2 cols[2] = {X(b + n - 1.0, w), Y(b + n - 1.0, w)};
    Mat2 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out(i, j) = rows[i] * k * cols[j];
    return out;
}

namespace {

// Product state with site 1 fastest.
template <class V>
Eigen::Matrix<cplx, Eigen::Dynamic, 1> product_state(const std::vector<V>& local) {
    const int n = int(local.size()), dim = 1 << n;
    Eigen::Matrix<cplx, Eigen::Dynamic, 1> out(dim);
    for (int s = 0; s < dim; ++s) {
        cplx v = 1.0;
        for (int k = 0; k < n; ++k) v *= local[k]((s >> k) & 1);
        out(s) = v;
    }
    return out;
}

}  // namespace

RowVec Gauge::left_reference(cplx b) const {
    const int n = m_.n();
    const cplx e = m_.eta();
    cplx norm = std::pow(2.0, n);
    std::vector<Row2> loc;
    for (int k = 1; k <= n; ++k) {
        norm *= m_.th(double(n - k + 1) * e + b * e);
        loc.push_back(Ytil(b + double(n - k), m_.params().xi[k - 1]));
    }
    return norm * product_state(loc).transpose();
}

Vec Gauge::right_reference(cplx b1) const {
    const int n = m_.n();
    std::vector<Vec2> loc;
    for (int k = 1; k <= n; ++k) loc.push_back(X(b1 + double(n - k), m_.params().xi[k - 1]));
    return product_state(loc);
}

cplx Gauge::a_scalar(cplx l) const { return r_fn(l) * m_.a_hat_minus(l); }

cplx gauge_condition(const Model& m, GaugeFamily family, cplx s, cplx l) {
    const cplx e = m.eta(), u = e / 2.0 - l, v = l - e / 2.0;
    Mat2 k = m.k_plus(l);
    Row2 co;
    Vec2 ve;
    if (family == GaugeFamily::B_left) {
        // s = (alpha - beta) eta
        co << -m.t(3, u + s - e), m.t(2, u + s - e);
        ve << m.t(2, v + s + e), m.t(3, v + s + e);
    } else {
        // s = (alpha + beta) eta
        co << m.t(3, u + s + e), -m.t(2, u + s + e);
        ve << m.t(2, v + s + 3.0 * e), m.t(3, v + s + 3.0 * e);
    }
    return co * k * ve;
}

double gauge_entry_residual(const Model& m, const GaugeFrame& f, GaugeFamily family, cplx l) {
    Gauge g(m, f.alpha);
    Mat2 kl = g.k_plus_lr(l, f.beta).L;
    cplx target = (family == GaugeFamily::B_left) ? kl(0, 1) : kl(1, 0);
    double scale = std::max(std::abs(kl(0, 0)), std::abs(kl(1, 1)));
    return std::abs(target) / scale;
}

GaugeFrame fix_gauge(const Model& m, GaugeFamily family, cplx beta, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ur(-kPi / 2, kPi / 2), ui(-1.0, 1.0);
    const double half_im = kPi * m.params().omega.imag() / 2.0;
    const cplx l1(0.21, 0.03);
    const cplx probes[3] = {{0.21, 0.03}, {-0.33, 0.1}, {0.05, -0.12}};
    auto score = [&](cplx s) {
        double worst = 0.0;
        for (cplx l : probes)
            worst = std::max(worst, std::abs(gauge_condition(m, family, s, l)) / m.k_plus(l).norm());
        return worst;
    };
    std::vector<cplx> branches;
    cplx best = 0.0;
    double best_res = 1e300;
    for (int trial = 0; trial < 48; ++trial) {
        cplx s(ur(rng), ui(rng) * half_im);
        for (int it = 0; it < 80; ++it) {
            cplx f = gauge_condition(m, family, s, l1);
            const double h = 1e-7;
            cplx df = (gauge_condition(m, family, s + h, l1) - gauge_condition(m, family, s - h, l1)) / (2.0 * h);
            if (std::abs(df) == 0.0) break;
            cplx step = f / df;
            if (std::abs(step) > 0.5) step *= 0.5 / std::abs(step);
            s -= step;
            if (std::abs(step) < 1e-14) break;
        }
        if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) continue;
        double res = score(s);
        if (res < 1e-10) {
            // Branches identified modulo pi.
            cplx red = s - kPi * std::round(s.real() / kPi);
            bool fresh = true;
            for (cplx b : branches)
                if (std::abs(b - red) < 1e-6) fresh = false;
            if (fresh) branches.push_back(red);
        }
        if (res < best_res) {
            best_res = res;
            best = s;
        }
    }
    if (best_res > 1e-9) throw ConvergenceError("fix_gauge: Newton multistart did not converge");
    GaugeFrame f;
    f.beta = beta;
    f.alpha = (family == GaugeFamily::B_left) ? beta + best / m.eta() : best / m.eta() - beta;
    f.branches = int(branches.size());
    const cplx checks[7] = {{0.21, 0.03}, {-0.33, 0.1}, {0.05, -0.12}, {0.4, 0.15},
                            {-0.12, -0.07}, {0.29, -0.18}, {-0.45, 0.02}};
    double worst = 0.0;
    for (cplx l : checks) worst = std::max(worst, gauge_entry_residual(m, f, family, l));
    f.fix_residual = worst;
    check_frame(m, f);
    return f;
}

void check_frame(const Model& m, const GaugeFrame& f) {
    const cplx e = m.eta();
    for (int k = -3; k <= m.n() + 4; ++k)
        if (std::abs(m.th((f.beta + double(k)) * e)) < 1e-4)
            throw DegeneracyError("gauge frame: beta too close to a theta zero");
}

cplx a_plus(const Model& m, const GaugeFrame& f, cplx x) {
    const cplx e = m.eta(), b = f.beta;
    Gauge g(m, f.alpha);
    return m.th(2.0 * x + e) * m.th((b + 1.0) * e) / (m.th(2.0 * x) * m.th((b + 2.0) * e)) *
           g.k_plus_lr(-x, b).L(1, 1);
}

cplx d_plus(const Model& m, const GaugeFrame& f, cplx x) {
    const cplx e = m.eta(), b = f.beta;
    Gauge g(m, f.alpha);
    return m.th(2.0 * x + e) * m.th((b + 1.0) * e) / (m.th(2.0 * x) * m.th(b * e)) * g.k_plus_lr(-x, b).R(0, 0);
}

}  // namespace xyz
