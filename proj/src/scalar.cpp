#include "xyz/scalar.hpp"

#include <algorithm>
#include <cmath>

namespace xyz {

namespace {

void check_frame_match(const SeparateState& s, const SovBasis& basis) {
    const GaugeFrame& f = basis.frame();
    if (std::abs(s.frame.alpha - f.alpha) > 1e-12 || std::abs(s.frame.beta - f.beta) > 1e-12)
        throw ParameterError("separate state and basis belong to different gauge frames");
    if (s.coeffs.rows() != basis.n() || s.coeffs.cols() != 2)
        throw ParameterError("separate state coefficient table has the wrong shape");
}

cplx weight(const SeparateState& s, int index) {
    cplx c = 1.0;
    for (int a = 0; a < s.coeffs.rows(); ++a) c *= s.coeffs(a, (index >> a) & 1);
    return c;
}

}  // namespace

SeparateState eigen_separate_state(const Spectrum& sp, const Vec& xs, Side side) {
    auto r = side == Side::right ? right_q_ratios(sp, xs) : left_q_ratios(sp, xs);
    SeparateState s;
    s.side = side;
    s.frame = sp.frame();
    s.coeffs.resize(sp.n(), 2);
    for (int a = 0; a < sp.n(); ++a) {
        s.coeffs(a, 0) = 1.0;
        s.coeffs(a, 1) = r[a];
    }
    return s;
}

Mat materialize(const SeparateState& s, const SovBasis& basis) {
    check_frame_match(s, basis);
    const int dim = basis.model().dim();
    Mat out = s.side == Side::left ? Mat(Mat::Zero(1, dim)) : Mat(Mat::Zero(dim, 1));
    for (int i = 0; i < basis.size(); ++i) {
        cplx c = weight(s, i) * basis.vdm(i);
        if (s.side == Side::left)
            out += c * basis.left(i);
        else
            out += c * basis.right(i);
    }
    return out;
}

cplx pairing_determinant(const SeparateState& u, const SeparateState& v, const Model& m) {
    const int n = m.n();
    if (n == 0) return 1.0;
    Mat mm(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            cplx s = 0.0;
            for (int h = 0; h < 2; ++h) s += u.coeffs(a, h) * v.coeffs(a, h) * std::pow(sov_eta(m, a, h), b);
            mm(a, b) = s;
        }
    return Eigen::PartialPivLU<Mat>(mm).determinant();
}

cplx pairing_direct(const SeparateState& u, const SeparateState& v, const SovBasis& basis) {
    if (u.side != Side::left || v.side != Side::right) throw ParameterError("pairing expects a left and a right state");
    return (materialize(u, basis) * materialize(v, basis))(0, 0);
}

cplx pairing_vandermonde_sum(const SeparateState& u, const SeparateState& v, const Model& m) {
    cplx s = 0.0;
    for (int i = 0; i < m.dim(); ++i) s += vandermonde(m, {m.n(), i}) * weight(u, i) * weight(v, i);
    return s;
}

GramReport gram_report(const Spectrum& sp, const SovBasis& basis, const std::vector<Vec>& xs) {
    const int k = int(xs.size());
    std::vector<SeparateState> ls, rs;
    for (const Vec& x : xs) {
        ls.push_back(eigen_separate_state(sp, x, Side::left));
        rs.push_back(eigen_separate_state(sp, x, Side::right));
    }
    GramReport g;
    g.determinant.resize(k, k);
    g.direct.resize(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            g.determinant(i, j) = pairing_determinant(ls[i], rs[j], sp.model());
            g.direct(i, j) = pairing_direct(ls[i], rs[j], basis);
        }
    double dmax = 0, dmin = 1e300;
    for (int i = 0; i < k; ++i) {
        dmax = std::max(dmax, std::abs(g.determinant(i, i)));
        dmin = std::min(dmin, std::abs(g.determinant(i, i)));
    }
    g.min_diag = k ? dmin / dmax : 0.0;
    // Entrywise agreement measured on the diagonal scale, so vanishing off-diagonals are compared absolutely.
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            double sc = std::sqrt(std::abs(g.direct(i, i)) * std::abs(g.direct(j, j)));
            g.formula_vs_direct = std::max(g.formula_vs_direct, std::abs(g.determinant(i, j) - g.direct(i, j)) / sc);
        }
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            if (i != j)
                g.offdiag_ratio = std::max(g.offdiag_ratio, std::abs(g.determinant(i, j)) /
                                                                std::sqrt(std::abs(g.determinant(i, i)) *
                                                                          std::abs(g.determinant(j, j))));
    return g;
}

}  // namespace xyz
