#include "helpers.hpp"

using namespace xyz;
using xyz::testing::draw;

TEST_CASE("theta parity and quasi-periodicity") {
    HalfPeriodRatio w2({0.0, 2.0});
    CHECK(std::abs(theta(1, 0.0, w2)) < 1e-15);
    HalfPeriodRatio w({0.1, 1.3});
    std::mt19937_64 rng(1);
    for (int k = 0; k < 5; ++k) {
        cplx z = draw(rng);
        CHECK(rel_diff(theta(2, z + kPi, w), -theta(2, z, w)) < 1e-13);
        cplx shifted = theta(4, z + kPi * w.omega(), w);
        cplx expected = -std::exp(-2.0 * I1 * z) / w.nome() * theta(4, z, w);
        CHECK(rel_diff(shifted, expected) < 1e-12);
        CHECK(rel_diff(theta(1, -z, w), -theta(1, z, w)) < 1e-14);
    }
}

TEST_CASE("theta series is converged at the default truncation") {
    HalfPeriodRatio w({0.0, 1.5});
    cplx z{0.3, 0.1};
    CHECK(rel_diff(theta(3, z, w), theta_series(3, z, w, 128, 1e-20)) < 1e-13);
}

TEST_CASE("theta argument reduction agrees with the raw series") {
    HalfPeriodRatio w({0.05, 0.9});
    cplx z{2.1, 1.7};
    // The raw series converges for any fixed z; compare to the strip-reduced value with a long cap.
    cplx ref = 0.0;
    const cplx q = w.nome();
    for (int n = 0; n < 200; ++n) {
        double h = n + 0.5;
        ref += (n % 2 ? -2.0 : 2.0) * std::pow(q, h * h) * std::sin((2.0 * n + 1.0) * z);
    }
    CHECK(rel_diff(theta(1, z, w), ref) < 1e-11);
}

TEST_CASE("nome bounds are enforced") {
    CHECK_THROWS_AS(HalfPeriodRatio({0.0, -1.0}), ParameterError);
    CHECK_THROWS_AS(HalfPeriodRatio({0.0, 0.01}), ParameterError);
    CHECK_THROWS_AS(theta(5, 0.1, HalfPeriodRatio({0.0, 1.0})), ParameterError);
}

TEST_CASE("elliptic moduli") {
    EllipticModuli m = elliptic_moduli(HalfPeriodRatio({0.0, 2.0}));
    CHECK(std::abs(m.k * m.k + m.k_prime * m.k_prime - 1.0) < 1e-12);
    EllipticModuli far = elliptic_moduli(HalfPeriodRatio({0.0, 8.0}));
    CHECK(std::abs(far.k) < 1e-8);
    // Product form of the theta constants at nome q2 = exp(2 i pi w).
    HalfPeriodRatio w({0.3, 1.2});
    cplx q2 = std::exp(2.0 * I1 * kPi * w.omega());
    cplx t2 = 2.0 * std::pow(q2, 0.25), t3 = 1.0, t4 = 1.0;
    for (int n = 1; n < 60; ++n) {
        cplx a = std::pow(q2, 2 * n), b = std::pow(q2, 2 * n - 1);
        t2 *= (1.0 - a) * (1.0 + a) * (1.0 + a);
        t3 *= (1.0 - a) * (1.0 + b) * (1.0 + b);
        t4 *= (1.0 - a) * (1.0 - b) * (1.0 - b);
    }
    EllipticModuli mw = elliptic_moduli(w);
    CHECK(rel_diff(mw.k, t2 * t2 / (t3 * t3)) < 1e-12);
    CHECK(rel_diff(mw.k_prime, t4 * t4 / (t3 * t3)) < 1e-12);
}

TEST_CASE("Jacobi functions") {
    HalfPeriodRatio w({0.1, 1.4});
    CHECK(std::abs(jacobi(JacobiFn::sn, 0.0, w)) < 1e-15);
    EllipticModuli m = elliptic_moduli(w);
    std::mt19937_64 rng(2);
    for (int k = 0; k < 5; ++k) {
        cplx l = draw(rng);
        cplx sn = jacobi(JacobiFn::sn, l, w), cn = jacobi(JacobiFn::cn, l, w), dn = jacobi(JacobiFn::dn, l, w);
        CHECK(std::abs(sn * sn + cn * cn - 1.0) < 1e-11);
        CHECK(std::abs(dn * dn + m.k * m.k * sn * sn - 1.0) < 1e-11);
    }
}

TEST_CASE("elliptic polynomial interpolation") {
    HalfPeriodRatio w({0.0, 1.6});
    std::mt19937_64 rng(3);
    const cplx c1 = draw(rng), c2 = draw(rng);
    auto p = [&](cplx l) { return theta(1, l - c1, w.doubled()) * theta(1, l - c2, w.doubled()); };
    std::vector<cplx> nodes = {draw(rng), draw(rng)};
    std::vector<cplx> vals = {p(nodes[0]), p(nodes[1])};
    EllipticPolySpec spec{2, c1 + c2};
    CHECK(rel_diff(elliptic_interpolate(spec, nodes, vals, nodes[1], w), vals[1]) < 1e-13);
    for (int k = 0; k < 10; ++k) {
        cplx l = draw(rng);
        cplx v = elliptic_interpolate(spec, nodes, vals, l, w);
        CHECK(rel_diff(v, p(l)) < 1e-11);
        CHECK(rel_diff(elliptic_interpolate(spec, nodes, vals, l + kPi, w), v) < 1e-11);
    }
    CHECK_THROWS_AS(elliptic_interpolate(spec, {nodes[0], nodes[0]}, vals, 0.1, w), DegeneracyError);
    CHECK_THROWS_AS(elliptic_interpolate(spec, {nodes[0]}, {vals[0]}, 0.1, w), ParameterError);
}

TEST_CASE("cancellation probe grows with the nome") {
    CHECK(theta_cancellation(HalfPeriodRatio({0.0, 1.6})) < 10.0);
    CHECK(theta_cancellation(HalfPeriodRatio({0.0, 0.05})) > 1e4);
}
