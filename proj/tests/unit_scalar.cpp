#include "helpers.hpp"

using namespace xyz;

namespace {

struct Fixture {
    explicit Fixture(int n, std::uint64_t seed = 41)
        : p(sample_params(n, seed)), m(p), f(fix_gauge(m, GaugeFamily::B_left, {0.3, 0.2}, seed)), basis(m, f) {}
    ModelParams p;
    Model m;
    GaugeFrame f;
    SovBasis basis;

    SeparateState random(Side side, std::mt19937_64& rng) const {
        std::normal_distribution<double> nd;
        SeparateState s{side, Mat(m.n(), 2), f};
        for (int a = 0; a < m.n(); ++a)
            for (int h = 0; h < 2; ++h) s.coeffs(a, h) = {nd(rng), nd(rng)};
        return s;
    }
};

}  // namespace

TEST_CASE("unit coefficients materialise to the Vandermonde-weighted sum") {
    Fixture fx(2);
    SeparateState u{Side::right, Mat::Ones(2, 2), fx.f};
    Vec sum = Vec::Zero(fx.basis.size());
    for (int i = 0; i < fx.basis.size(); ++i) sum += fx.basis.vdm(i) * fx.basis.right(i);
    CHECK(rel_diff(materialize(u, fx.basis), Mat(sum)) < 1e-12);

    SeparateState l{Side::left, Mat::Ones(2, 2), fx.f};
    RowVec lsum = RowVec::Zero(fx.basis.size());
    for (int i = 0; i < fx.basis.size(); ++i) lsum += fx.basis.vdm(i) * fx.basis.left(i);
    CHECK(rel_diff(materialize(l, fx.basis), Mat(lsum)) < 1e-12);
}

TEST_CASE("a single-h state is one basis element") {
    Fixture fx(2);
    // h = (1, 0): keep only u_1(zeta^1) and u_2(zeta^0).
    Mat c = Mat::Zero(2, 2);
    c(0, 1) = 1.0;
    c(1, 0) = 1.0;
    SeparateState s{Side::right, c, fx.f};
    CHECK(rel_diff(materialize(s, fx.basis), Mat(fx.basis.vdm(1) * fx.basis.right(1))) < 1e-12);
}

TEST_CASE("one-site pairing is a single sum") {
    Fixture fx(1);
    std::mt19937_64 rng(42);
    SeparateState u = fx.random(Side::left, rng), v = fx.random(Side::right, rng);
    const cplx expect = u.coeffs(0, 0) * v.coeffs(0, 0) + u.coeffs(0, 1) * v.coeffs(0, 1);
    CHECK(rel_diff(pairing_determinant(u, v, fx.m), expect) < 1e-13);
    CHECK(rel_diff(pairing_direct(u, v, fx.basis), expect) < 1e-9);
}

TEST_CASE("determinant formula agrees with direct contraction") {
    for (int n = 1; n <= 3; ++n) {
        CAPTURE(n);
        Fixture fx(n);
        std::mt19937_64 rng(43 + n);
        for (int k = 0; k < 5; ++k) {
            SeparateState u = fx.random(Side::left, rng), v = fx.random(Side::right, rng);
            const cplx det = pairing_determinant(u, v, fx.m);
            CHECK(rel_diff(det, pairing_direct(u, v, fx.basis)) < 1e-8);
            CHECK(rel_diff(det, pairing_vandermonde_sum(u, v, fx.m)) < 1e-10);
        }
    }
}

TEST_CASE("eigenstate Gram matrix is diagonal") {
    Fixture fx(2);
    Spectrum sp(fx.m, fx.f);
    auto ox = oracle_x(sp, oracle_diagonalize(fx.m, {0.17, 0.06}));
    GramReport g = gram_report(sp, fx.basis, ox);
    CHECK(g.offdiag_ratio < 1e-8);
    CHECK(g.min_diag > 1e-8);
    CHECK(g.formula_vs_direct < 1e-8);
}
