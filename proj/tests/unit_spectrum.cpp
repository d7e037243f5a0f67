#include "helpers.hpp"

using namespace xyz;
using xyz::testing::draw;

namespace {

struct Fixture {
    explicit Fixture(int n, std::uint64_t seed = 31)
        : p(sample_params(n, seed)), m(p), f(fix_gauge(m, GaugeFamily::B_left, {0.3, 0.2}, seed)), sp(m, f) {}
    ModelParams p;
    Model m;
    GaugeFrame f;
    Spectrum sp;
};

}  // namespace

TEST_CASE("interpolation nodes and Lagrange functions") {
    Fixture fx(2);
    CHECK(fx.sp.nodes().size() == 6);
    std::mt19937_64 rng(32);
    const auto& nd = fx.sp.nodes();
    for (std::size_t a = 0; a < nd.size(); ++a) {
        for (std::size_t c = 0; c < nd.size(); ++c)
            CHECK(std::abs(fx.sp.lagrange(int(a), nd[c]) - (a == c ? 1.0 : 0.0)) < 1e-10);
        const cplx l = draw(rng);
        CHECK(rel_diff(fx.sp.lagrange(int(a), -l), fx.sp.lagrange(int(a), l)) < 1e-10);
    }
}

TEST_CASE("t_hat reproduces the prescribed values") {
    Fixture fx(2);
    Vec xs(2);
    xs << cplx(0.3, -0.1), cplx(-1.2, 0.4);
    const auto& nd = fx.sp.nodes();
    for (int a = 0; a < 4; ++a) CHECK(rel_diff(fx.sp.t_hat(nd[a], xs), fx.sp.boundary_values()[a]) < 1e-9);
    for (int a = 0; a < 2; ++a) CHECK(rel_diff(fx.sp.t_hat(nd[4 + a], xs), xs(a)) < 1e-9);
}

TEST_CASE("dense oracle eigenvalues solve the quadratic system") {
    for (int n = 1; n <= 3; ++n) {
        CAPTURE(n);
        Fixture fx(n);
        auto orc = oracle_diagonalize(fx.m, {0.17, 0.06});
        REQUIRE(int(orc.size()) == (1 << n));
        auto ox = oracle_x(fx.sp, orc);
        for (const Vec& x : ox) CHECK(fx.sp.relative_residual(x) < 1e-7);
        // A generic point is far from solving it.
        Vec junk = ox.front();
        junk(0) += 0.5 * std::abs(junk(0)) + 0.5;
        CHECK(fx.sp.relative_residual(junk) > 1e-4);
    }
}

TEST_CASE("Newton from the oracle recovers every eigenvalue") {
    Fixture fx(2);
    auto ox = oracle_x(fx.sp, oracle_diagonalize(fx.m, {0.17, 0.06}));
    SolveOptions opt;
    opt.seed = 5;
    SolveReport r = solve_spectrum(fx.sp, ox, opt);
    CHECK(r.complete());
    CHECK(r.multistart_complete());
    pair_with_oracle(r.solutions, ox);
    for (const auto& s : r.solutions) {
        CHECK(s.residual < 1e-10);
        CHECK(s.oracle_distance < 1e-8);
    }
}

TEST_CASE("Newton solution perturbed off the variety converges back") {
    Fixture fx(2);
    auto ox = oracle_x(fx.sp, oracle_diagonalize(fx.m, {0.17, 0.06}));
    Vec x0 = ox[1] * cplx(1.0 + 1e-3, 1e-3);
    NewtonResult nr = newton_solve(fx.sp, x0);
    CHECK(nr.converged);
    CHECK(x_distance(nr.x, ox[1]) < 1e-8);
}

TEST_CASE("eigenvalue function symmetries") {
    Fixture fx(2);
    auto orc = oracle_diagonalize(fx.m, {0.17, 0.06});
    auto ox = oracle_x(fx.sp, orc);
    const cplx l{0.11, -0.04}, q = fx.m.thetas().nome();
    const Vec& x = ox[0];
    const cplx t = fx.sp.t_fn(l, x);
    CHECK(rel_diff(fx.sp.t_fn(-l, x), t) < 1e-9);
    CHECK(rel_diff(fx.sp.t_fn(l + kPi, x), t) < 1e-9);
    CHECK(rel_diff(fx.sp.t_fn(l + kPi * fx.p.omega, x), std::pow(std::exp(-2.0 * I1 * l) / q, 6) * t) < 1e-8);
    cplx ray = (orc[0].left * fx.m.transfer(l) * orc[0].right)(0, 0);
    CHECK(rel_diff(t, ray) < 1e-8);
}

TEST_CASE("SOV eigenvectors") {
    Fixture fx(2);
    SovBasis basis(fx.m, fx.f);
    auto ox = oracle_x(fx.sp, oracle_diagonalize(fx.m, {0.17, 0.06}));
    const cplx l{0.09, 0.13};
    Mat t = fx.m.transfer(l);
    for (const Vec& x : ox) {
        const cplx tv = fx.sp.t_fn(l, x);
        Vec r = right_eigenstate(fx.sp, basis, x);
        RowVec lf = left_eigenstate(fx.sp, basis, x);
        CHECK(rel_diff(Mat(t * r), Mat(tv * r)) < 1e-8);
        CHECK(rel_diff(Mat(lf * t), Mat(tv * lf)) < 1e-8);
    }
}

TEST_CASE("empty chain has one eigenvalue") {
    Fixture fx(0);
    CHECK(fx.sp.nodes().size() == 4);
    SolveReport r = solve_spectrum(fx.sp, {Vec(0)}, SolveOptions{});
    CHECK(r.expected == 1);
    CHECK(r.complete());
}
