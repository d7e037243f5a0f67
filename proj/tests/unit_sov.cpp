#include "helpers.hpp"

using namespace xyz;
using xyz::testing::draw;

namespace {

struct Fixture {
    explicit Fixture(int n, std::uint64_t seed = 21)
        : p(sample_params(n, seed)), m(p), f(fix_gauge(m, GaugeFamily::B_left, {0.3, 0.2}, seed)), g(m, f.alpha) {}
    ModelParams p;
    Model m;
    GaugeFrame f;
    Gauge g;
};

}  // namespace

TEST_CASE("h-tuples") {
    HTuple h{3, 5};
    CHECK(h.bit(0) == 1);
    CHECK(h.bit(1) == 0);
    CHECK(h.bit(2) == 1);
    CHECK(h.flipped(1).index == 7);
    CHECK(HTuple::ones(3).index == 7);
}

TEST_CASE("left reference state for one site") {
    Fixture fx(1);
    const cplx l{0.14, 0.03}, b = fx.f.beta;
    Gauge::Bulk mb = fx.g.bulk(l, b);
    RowVec ref = fx.g.left_reference(b);
    CHECK(ref.size() == 2);
    CHECK((ref * mb.M[0][1]).norm() < 1e-10 * ref.norm() * mb.M[0][1].norm());
    CHECK((ref * mb.Mbar[0][1]).norm() < 1e-10 * ref.norm() * mb.Mbar[0][1].norm());
}

TEST_CASE("pseudo-eigenvalue of the h = 0 state") {
    Fixture fx(2);
    const cplx l{0.1, 0.07}, e = fx.m.eta();
    cplx a0 = 1.0;
    for (cplx x : fx.p.xi) a0 *= fx.m.th(l - x + e / 2.0);
    CHECK(rel_diff(a_h(fx.m, HTuple{2, 0}, l), a0) < 1e-13);
}

TEST_CASE("SOV basis") {
    for (int n = 1; n <= 3; ++n) {
        CAPTURE(n);
        Fixture fx(n);
        SovBasis basis(fx.m, fx.f);
        CHECK(basis.size() == (1 << n));
        CHECK(basis.rank_left() == (1 << n));
        CHECK(basis.rank_right() == (1 << n));
        CHECK(basis.mjj_residual() < 1e-8);
        CHECK(basis.offdiag_residual() < 1e-10);
        CHECK(basis.identity_residual() < 1e-8);
    }
}

TEST_CASE("left states do not depend on the ordering of the A factors") {
    Fixture fx(3);
    const cplx b = fx.f.beta;
    for (int i = 0; i < 8; ++i) {
        HTuple h{3, i};
        CHECK(rel_diff(Mat(sov_left_unnormalized(fx.g, b, h)), Mat(sov_left_unnormalized(fx.g, b, h, {2, 0, 1}))) < 1e-10);
    }
}

TEST_CASE("interpolated A and D match the dense operators") {
    Fixture fx(2);
    SovBasis basis(fx.m, fx.f);
    std::mt19937_64 rng(22);
    for (int k = 0; k < 3; ++k) {
        const cplx l = draw(rng);
        Mat a = fx.g.op(GenOp::A, l, fx.f.beta + 2.0), d = fx.g.op(GenOp::D, l, fx.f.beta + 2.0);
        for (int i = 0; i < basis.size(); ++i) {
            CHECK(rel_diff(Mat(basis.left(i) * a), Mat(basis.interp_left_A(i, l))) < 1e-7);
            CHECK(rel_diff(Mat(d * basis.right(i)), Mat(basis.interp_right_D(i, l))) < 1e-7);
        }
    }
}

TEST_CASE("separation condition violation is detected") {
    Fixture fx(2);
    ModelParams bad = fx.p;
    bad.xi[1] = bad.xi[0] + bad.eta;
    Model mb(bad);
    CHECK_THROWS_AS(SovBasis(mb, fx.f), DegeneracyError);
}

TEST_CASE("SOV battery passes") {
    Fixture fx(2);
    Report rep;
    BatteryContext ctx;
    sov_battery(fx.p, fx.f, ctx, rep);
    for (const auto& r : rep.records()) {
        INFO(r.id);
        CHECK(r.pass);
    }
}
