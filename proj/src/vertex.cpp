#include "xyz/vertex.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

namespace xyz {

void ModelParams::validate() const {
    if (n_sites < 0 || n_sites > 10) throw ParameterError("model: n_sites must be in 0..10");
    if (int(xi.size()) != n_sites) throw ParameterError("model: need one inhomogeneity per site");
    HalfPeriodRatio check(omega);
    Thetas th(omega);
    if (std::abs(th.t(1, minus.zeta)) < 1e-10 || std::abs(th.t(1, plus.zeta)) < 1e-10)
        throw ParameterError("model: theta_1(zeta|2w) too close to zero");
}

namespace {

// Distance of d from the lattice pi Z + pi omega Z.
double lattice_dist(cplx d, cplx omega) {
    const cplx pw = kPi * omega;
    double y = d.imag() / pw.imag();
    double x = (d.real() - y * pw.real()) / kPi;
    double best = 1e300;
    for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j) {
            double dx = x - std::round(x) + i, dy = y - std::round(y) + j;
            best = std::min(best, std::abs(cplx(dx * kPi, 0.0) + dy * pw));
        }
    return best;
}

}  // namespace

double esov_margin(const ModelParams& p) {
    double best = 1e300;
    for (int a = 0; a < p.n_sites; ++a)
        for (int b = 0; b < p.n_sites; ++b) {
            if (a == b) continue;
            for (int r = -1; r <= 1; ++r)
                best = std::min(best, lattice_dist(p.xi[a] - p.xi[b] - double(r) * p.eta, p.omega));
        }
    return best;
}

ModelParams sample_params(int n_sites, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> re(-0.4, 0.4), im(-0.2, 0.2);
    auto draw = [&] { return cplx(re(rng), im(rng)); };
    for (int attempt = 0; attempt < 10000; ++attempt) {
        ModelParams p;
        p.n_sites = n_sites;
        for (int n = 0; n < n_sites; ++n) p.xi.push_back(draw());
        p.minus = {draw(), draw(), draw()};
        p.plus = {draw(), draw(), draw()};
        if (n_sites > 1 && esov_margin(p) < 0.03) continue;
        // Interpolation nodes (boundary points and xi +- eta/2) must stay apart up to sign.
        const cplx e = p.eta, w = kPi * p.omega;
        std::vector<cplx> nodes = {e / 2.0, (e - kPi) / 2.0, (e - w) / 2.0, (e - kPi - w) / 2.0};
        for (cplx x : p.xi) {
            nodes.push_back(x - e / 2.0);
            nodes.push_back(x + e / 2.0);
        }
        bool ok = true;
        for (size_t a = 0; a < nodes.size() && ok; ++a) {
            if (a >= 4 && lattice_dist(2.0 * nodes[a], p.omega) < 0.03) ok = false;
            for (size_t b = 0; b < a && ok; ++b)
                if (lattice_dist(nodes[a] - nodes[b], p.omega) < 0.03 ||
                    lattice_dist(nodes[a] + nodes[b], p.omega) < 0.03)
                    ok = false;
        }
        if (ok) return p;
    }
    throw DegeneracyError("sample_params: could not meet genericity margins");
}

AuxBlocks split_aux(const Mat& m) {
    Eigen::Index d = m.rows() / 2;
    return {m.topLeftCorner(d, d), m.topRightCorner(d, d), m.bottomLeftCorner(d, d),
            m.bottomRightCorner(d, d)};
}

Mat join_aux(const AuxBlocks& b) {
    Eigen::Index d = b.A.rows();
    Mat m(2 * d, 2 * d);
    m << b.A, b.B, b.C, b.D;
    return m;
}

Mat aux_embed(const Mat2& k, int dim) {
    Mat m = Mat::Zero(2 * dim, 2 * dim);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) m.block(i * dim, j * dim, dim, dim).diagonal().setConstant(k(i, j));
    return m;
}

Mat aux_transpose(const Mat& m) {
    AuxBlocks b = split_aux(m);
    std::swap(b.B, b.C);
    return join_aux(b);
}

Mat site_op(const Mat2& op, int site, int n_sites) {
    int dim = 1 << n_sites, bit = 1 << (site - 1);
    Mat m = Mat::Zero(dim, dim);
    for (int s = 0; s < dim; ++s) {
        int k = (s & bit) ? 1 : 0;
        int s0 = s & ~bit;
        for (int l = 0; l < 2; ++l) m(s, s0 | (l ? bit : 0)) += op(k, l);
    }
    return m;
}

namespace {

// m <- R_{0n} m, R acting on (aux, site n) with row index 2*aux + site.
void apply_r0n(const Mat4& r, int site, int dim, Mat& m) {
    int bit = 1 << (site - 1);
    Eigen::Index cols = m.cols();
    for (int s0 = 0; s0 < dim; ++s0) {
        if (s0 & bit) continue;
        int rows[4] = {s0, s0 | bit, dim + s0, dim + (s0 | bit)};
        for (Eigen::Index c = 0; c < cols; ++c) {
            cplx v[4], w[4];
            for (int k = 0; k < 4; ++k) v[k] = m(rows[k], c);
            for (int i = 0; i < 4; ++i) {
                w[i] = 0.0;
                for (int k = 0; k < 4; ++k) w[i] += r(i, k) * v[k];
            }
            for (int k = 0; k < 4; ++k) m(rows[k], c) = w[k];
        }
    }
}

Mat2 sigma_y() {
    Mat2 s;
    s << 0.0, -I1, I1, 0.0;
    return s;
}

}  // namespace

Model::Model(ModelParams p) : p_(std::move(p)), th_(p_.omega) { p_.validate(); }

Weights Model::weights(cplx l) const {
    const cplx e = p_.eta;
    cplx den = th_.tw(2, 0.0) * t(4, 0.0);
    return {2.0 * t(4, e) * t(1, l + e) * t(4, l) / den, 2.0 * t(4, e) * t(1, l) * t(4, l + e) / den,
            2.0 * t(1, e) * t(4, l) * t(4, l + e) / den, 2.0 * t(1, e) * t(1, l + e) * t(1, l) / den};
}

Weights Model::weights_sn_form(cplx l) const {
    const cplx e = p_.eta;
    EllipticModuli mod = elliptic_moduli(th_.ratio());
    cplx f = 2.0 * std::sqrt(mod.k) * t(4, e) * t(4, l) * t(4, l + e) / (th_.tw(2, 0.0) * t(4, 0.0));
    auto sn = [&](cplx x) { return jacobi(JacobiFn::sn, x, th_.ratio()); };
    return {f * sn(l + e), f * sn(l), f * sn(e), f * mod.k * sn(l + e) * sn(l) * sn(e)};
}

Mat4 Model::r_matrix(cplx l) const {
    Weights w = weights(l);
    Mat4 r = Mat4::Zero();
    r(0, 0) = r(3, 3) = w.a;
    r(1, 1) = r(2, 2) = w.b;
    r(1, 2) = r(2, 1) = w.c;
    r(0, 3) = r(3, 0) = w.d;
    return r;
}

Mat2 Model::k_raw_reg(cplx l, const BoundaryParams& bp) const {
    const cplx z = bp.zeta, g = t(4, 2.0 * l);
    Mat2 k;
    k(0, 0) = t(4, z) * t(4, z - l) * t(1, l + z) / t(1, z) * g;
    k(1, 1) = t(4, z) * t(1, z - l) * t(4, l + z) / t(1, z) * g;
    cplx den = t(1, z) * std::pow(t(4, z), -3) * t(4, 0.0) * t(4, 0.0);
    cplx t4 = t(4, l), t1 = t(1, l);
    k(0, 1) = bp.kappa * std::exp(bp.tau) * t(1, 2.0 * l) * (t4 * t4 - std::exp(-2.0 * bp.tau) * t1 * t1) / den;
    k(1, 0) = bp.kappa * std::exp(-bp.tau) * t(1, 2.0 * l) * (t4 * t4 - std::exp(2.0 * bp.tau) * t1 * t1) / den;
    return k;
}

Mat2 Model::k_raw(cplx l, const BoundaryParams& bp) const {
    cplx g = t(4, 2.0 * l);
    if (std::abs(g) < 1e-12) throw PoleError("K: theta_4(2 lambda|2w) vanishes");
    return k_raw_reg(l, bp) / g;
}

Mat Model::monodromy(cplx l) const {
    int d = dim();
    Mat m = Mat::Identity(2 * d, 2 * d);
    for (int n = 1; n <= p_.n_sites; ++n) apply_r0n(r_matrix(l - p_.xi[n - 1] - p_.eta / 2.0), n, d, m);
    return m;
}

Mat Model::hat_monodromy(cplx l) const {
    int d = dim();
    Mat sy = aux_embed(sigma_y(), d);
    double sg = (p_.n_sites % 2) ? -1.0 : 1.0;
    return sg * sy * aux_transpose(monodromy(-l)) * sy;
}

Mat Model::u_minus(cplx l) const { return monodromy(l) * aux_embed(k_minus(l), dim()) * hat_monodromy(l); }

Mat Model::u_minus_reg(cplx l) const {
    return monodromy(l) * aux_embed(k_minus_reg(l), dim()) * hat_monodromy(l);
}

Mat Model::u_plus_t(cplx l) const {
    Mat2 kt = k_plus(l).transpose();
    return aux_transpose(monodromy(l)) * aux_embed(kt, dim()) * aux_transpose(hat_monodromy(l));
}

namespace {
Mat aux_trace_product(const Mat2& k, const Mat& u) {
    AuxBlocks b = split_aux(u);
    return k(0, 0) * b.A + k(0, 1) * b.C + k(1, 0) * b.B + k(1, 1) * b.D;
}
}  // namespace

Mat Model::transfer(cplx l) const { return aux_trace_product(k_plus(l), u_minus(l)); }

Mat Model::transfer_hat(cplx l) const { return aux_trace_product(k_plus_reg(l), u_minus_reg(l)); }

Mat Model::u_tilde(cplx l) const {
    AuxBlocks u = split_aux(u_minus(l));
    Weights w = weights(2.0 * l);
    return join_aux({u.D * w.b - u.A * w.c, u.C * w.d - u.B * w.a, u.B * w.d - u.C * w.a, u.A * w.b - u.D * w.c});
}

cplx Model::p_fn(cplx l) const {
    const cplx e = p_.eta;
    return 2.0 * t(4, 2.0 * l + e) * t(1, 2.0 * l - e) / th_.tw(2, 0.0);
}

cplx Model::p_fn_alt(cplx l) const {
    const cplx e = p_.eta;
    return th(2.0 * l - e) * t(4, 2.0 * l + e) / t(4, 2.0 * l - e);
}

cplx Model::a_bulk(cplx l) const {
    cplx out = 1.0;
    for (cplx x : p_.xi) out *= th(l - x + p_.eta / 2.0);
    return out;
}

cplx Model::g_fn(cplx x, const BoundaryParams& bp) const {
    EllipticModuli mod = elliptic_moduli(th_.ratio());
    const cplx kk = mod.k, sk = std::sqrt(kk);
    auto sn = [&](cplx u) { return t(1, u) / (sk * t(4, u)); };
    const cplx z = bp.zeta, y = x - p_.eta / 2.0;
    cplx h = t(4, y + z) * t(4, y - z) / sn(z);
    cplx sy2 = sn(y) * sn(y);
    cplx root1 = std::sqrt(sn(z + y) * sn(z - y));
    cplx root2 = std::sqrt((1.0 - kk * std::exp(2.0 * bp.tau) * sy2) * (1.0 - kk * std::exp(-2.0 * bp.tau) * sy2));
    return h * (root1 + bp.kappa * sn(2.0 * y) * root2 / (1.0 - kk * kk * sn(z) * sn(z) * sy2));
}

cplx Model::det_q_k_minus(cplx l) const {
    Mat2 k1 = k_minus(l + p_.eta / 2.0), k2 = k_minus(p_.eta / 2.0 - l);
    return p_fn(l - p_.eta / 2.0) * (k1(0, 0) * k2(0, 0) + k1(0, 1) * k2(1, 0));
}

cplx Model::det_q_k_plus(cplx l) const { return p_fn(-l - p_.eta / 2.0) * k_plus(l - p_.eta / 2.0).determinant(); }

cplx Model::det_q_u_minus_explicit(cplx l) const {
    const cplx e = p_.eta;
    return p_fn(l - e / 2.0) * a_hat_minus(l + e / 2.0) * a_hat_minus(-l + e / 2.0);
}

std::array<cplx, 4> Model::boundary_nodes() const {
    const cplx e = p_.eta, w = kPi * p_.omega;
    return {e / 2.0, (e - kPi) / 2.0, (e - w) / 2.0, (e - kPi - w) / 2.0};
}

std::array<cplx, 4> Model::boundary_node_values() const {
    const cplx e = p_.eta, w = kPi * p_.omega;
    const cplx zm = p_.minus.zeta, zp = p_.plus.zeta;
    const cplx t2w0 = th_.tw(2, 0.0), t2we = th_.tw(2, e);
    double sgn = (p_.n_sites % 2) ? -1.0 : 1.0;
    std::array<cplx, 4> v;
    v[0] = sgn * 2.0 * t2we * std::pow(t(4, zm), 2) * std::pow(t(4, zp), 2) / t2w0 * det_q_bulk(0.0);
    cplx pr = 1.0;
    for (cplx z : {zm, zp}) pr *= t(4, z) * t(3, z) * t(2, z);
    v[1] = 2.0 * t2we * pr / (t2w0 * t(1, zm) * t(1, zp)) * det_q_bulk(kPi / 2.0);
    // t_hat carries theta_4(2 eta) theta_4(0) relative to t at these two nodes.
    v[0] *= t(4, 2.0 * e) * t(4, 0.0);
    v[1] *= t(4, 2.0 * e) * t(4, 0.0);

    cplx zsum = 0.0;
    for (cplx x : p_.xi) zsum += x - e / 2.0;
    cplx common = 4.0 * p_.minus.kappa * p_.plus.kappa * std::exp(-2.0 * I1 * zsum) * t(1, w) * t(1, 2.0 * e - w) *
                  std::pow(t(4, zm), 3) * std::pow(t(4, zp), 3) / (t(1, zm) * t(1, zp) * std::pow(t(4, 0.0), 4));
    cplx x3 = w / 2.0, y3 = e - x3;
    v[2] = common * std::cosh(p_.minus.tau) * std::cosh(p_.plus.tau) * det_q_bulk(x3) * std::pow(t(1, x3), 2) *
           (std::pow(t(4, y3), 2) - std::pow(t(1, y3), 2));
    cplx x4 = (w + kPi) / 2.0, y4 = e - x4;
    v[3] = common * std::sinh(p_.minus.tau) * std::sinh(p_.plus.tau) * det_q_bulk(x4) * std::pow(t(1, x4), 2) *
           (std::pow(t(4, y4), 2) + std::pow(t(1, y4), 2));
    return v;
}

Mat Model::xyz_hamiltonian() const {
    const int n = p_.n_sites;
    if (n < 2) throw ParameterError("hamiltonian: needs at least two sites");
    const cplx e = p_.eta;
    const HalfPeriodRatio& r = th_.ratio();
    EllipticModuli mod = elliptic_moduli(r);
    auto sn = [&](cplx x) { return jacobi(JacobiFn::sn, x, r); };
    auto cn = [&](cplx x) { return jacobi(JacobiFn::cn, x, r); };
    auto dn = [&](cplx x) { return jacobi(JacobiFn::dn, x, r); };
    Mat2 sx, sy = sigma_y(), sz;
    sx << 0.0, 1.0, 1.0, 0.0;
    sz << 1.0, 0.0, 0.0, -1.0;
    int d = 1 << n;
    Mat h = Mat::Zero(d, d);
    cplx sn_e = sn(e);
    cplx jx = 1.0 + mod.k * sn_e * sn_e, jy = 1.0 - mod.k * sn_e * sn_e, jz = cn(e) * dn(e);
    for (int i = 1; i < n; ++i) {
        h += jx * site_op(sx, i, n) * site_op(sx, i + 1, n);
        h += jy * site_op(sy, i, n) * site_op(sy, i + 1, n);
        h += jz * site_op(sz, i, n) * site_op(sz, i + 1, n);
    }
    auto boundary = [&](const BoundaryParams& bp, int site) {
        cplx z = bp.zeta;
        Mat2 f = cn(z) * dn(z) * sz + 2.0 * bp.kappa * (std::cosh(bp.tau) * sx + I1 * std::sinh(bp.tau) * sy);
        return Mat(sn_e / sn(z) * site_op(f, site, n));
    };
    h += boundary(p_.minus, 1);
    h += boundary(p_.plus, n);
    return h;
}

QuantumDet quantum_det_u_minus(const Model& m, cplx l) {
    const cplx e = m.eta();
    AuxBlocks u1 = split_aux(m.u_minus(l + e / 2.0)), u2 = split_aux(m.u_minus(e / 2.0 - l));
    AuxBlocks u3 = split_aux(m.u_minus(-l + e / 2.0)), u4 = split_aux(m.u_minus(l + e / 2.0));
    Mat f1 = u1.A * u2.A + u1.B * u2.C;
    Mat f2 = u1.D * u2.D + u1.C * u2.B;
    Mat f3 = u3.A * u4.A + u3.B * u4.C;
    cplx s = f1.trace() / double(m.dim());
    Mat id = Mat::Identity(m.dim(), m.dim());
    QuantumDet q;
    q.value = s * m.p_fn(l - e / 2.0);
    q.scalar_resid_plus = std::max(rel_diff(f1, s * id), rel_diff(f2, s * id));
    q.scalar_resid_minus = rel_diff(f3, s * id);
    q.eps_agreement = rel_diff(f1, f3);
    return q;
}

std::vector<Eigenpair> oracle_diagonalize(const Model& m, cplx lambda_star) {
    Mat t = m.transfer(lambda_star);
    Eigen::ComplexEigenSolver<Mat> es(t);
    if (es.info() != Eigen::Success) throw ConvergenceError("oracle: eigen-decomposition failed");
    const Vec& w = es.eigenvalues();
    double scale = w.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < w.size(); ++i)
        for (Eigen::Index j = 0; j < i; ++j)
            if (std::abs(w(i) - w(j)) < 1e-7 * scale) throw DegeneracyError("oracle: near-degenerate eigenvalues");
    Mat v = es.eigenvectors();
    Mat vinv = v.inverse();
    std::vector<Eigenpair> out;
    for (Eigen::Index i = 0; i < w.size(); ++i) out.push_back({w(i), v.col(i), vinv.row(i)});
    return out;
}

}  // namespace xyz
