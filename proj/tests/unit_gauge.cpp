#include "helpers.hpp"

using namespace xyz;
using xyz::testing::draw;

namespace {

struct Fixture {
    ModelParams p = sample_params(2, 11);
    Model m{p};
    GaugeFrame f = fix_gauge(m, GaugeFamily::B_left, {0.3, 0.2}, 11);
    Gauge g{m, f.alpha};
};

}  // namespace

TEST_CASE("intertwining vectors") {
    Fixture fx;
    std::mt19937_64 rng(12);
    const cplx b{0.7, 0.4}, l = draw(rng);
    CHECK(std::abs((fx.g.Ybar(b, l) * fx.g.X(b, l))(0) - 1.0) < 1e-12);
    CHECK((fx.g.Y(b, l) - fx.g.X(-b, l)).norm() < 1e-15);
    Mat2 c = fx.g.X(b + 1.0, l) * fx.g.Ytil(b - 1.0, l) + fx.g.Y(b - 1.0, l) * fx.g.Xtil(b + 1.0, l);
    CHECK((c - Mat2::Identity()).norm() < 1e-11);
}

TEST_CASE("dynamical R-matrix") {
    Fixture fx;
    const cplx b{0.7, 0.4}, l{0.15, 0.08};
    Mat4 r = fx.g.dynamical_r(l, b);
    CHECK(rel_diff(r(0, 0), fx.m.th(l + fx.m.eta())) < 1e-14);
    Mat4 r0 = fx.g.dynamical_r(0.0, b);
    // b(0|beta) vanishes: only the a and c entries survive at zero spectral parameter.
    CHECK(std::abs(r0(1, 1)) < 1e-15);
    CHECK(std::abs(r0(2, 2)) < 1e-15);
}

TEST_CASE("gauge battery passes on a generic sample") {
    Fixture fx;
    Report rep;
    BatteryContext ctx;
    gauge_battery(fx.p, fx.f, ctx, rep);
    CHECK(rep.records().size() > 20);
    for (const auto& r : rep.records()) {
        INFO(r.id);
        CHECK(r.pass);
    }
}

TEST_CASE("gauge fixing is isolated") {
    Fixture fx;
    std::mt19937_64 rng(13);
    double worst = 0;
    for (int k = 0; k < 7; ++k) worst = std::max(worst, gauge_entry_residual(fx.m, fx.f, GaugeFamily::B_left, draw(rng)));
    CHECK(worst < 1e-8);
    GaugeFrame off = fx.f;
    off.beta += 1e-3;
    CHECK(gauge_entry_residual(fx.m, off, GaugeFamily::B_left, {0.1, 0.05}) > 1e-6);
    GaugeFrame c = fix_gauge(fx.m, GaugeFamily::C_left, {0.3, 0.2}, 11);
    CHECK(gauge_entry_residual(fx.m, c, GaugeFamily::C_left, {0.1, 0.05}) < 1e-8);
}

TEST_CASE("even representation coefficients") {
    Fixture fx;
    const cplx l{0.12, -0.05}, b = fx.f.beta;
    auto th = [&](cplx x) { return fx.m.th(x); };
    const cplx e = fx.m.eta();
    KPlusLR k = fx.g.k_plus_lr(l, b), km = fx.g.k_plus_lr(-l, b);
    cplx lhs = k.L(0, 0) + th(e) * th(2.0 * l + (b + 1.0) * e) / (th(2.0 * l) * th((b + 2.0) * e)) * k.L(1, 1);
    cplx rhs = th(2.0 * l + e) * th((b + 1.0) * e) / (th(2.0 * l) * th((b + 2.0) * e)) * km.L(1, 1);
    CHECK(rel_diff(lhs, rhs) < 1e-10);
    CHECK(rel_diff(lhs, a_plus(fx.m, fx.f, l)) < 1e-10);
}

TEST_CASE("degenerate beta is rejected") {
    Fixture fx;
    GaugeFrame bad = fx.f;
    bad.beta = 0.0;
    CHECK_THROWS(check_frame(fx.m, bad));
}
