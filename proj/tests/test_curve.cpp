#include <doctest.h>

#include "nmm/curve.hpp"
#include "support.hpp"

#include <random>

using namespace nmm;
using nmm::testing::random_valid_curve;
using nmm::testing::green_area;

TEST_SUITE("curve") {

TEST_CASE("evaluation")
{
    CHECK(std::abs(PolynomialCurve(1.0, {}).evaluate({0, 1}) - cplx(0, 1)) < 1e-15);
    CHECK(std::abs(PolynomialCurve(1.0, {0.0, 0.5}).evaluate(1.0) - 1.5) < 1e-15);
    CHECK(std::abs(PolynomialCurve(0.5, {0.0, 0.0, 0.075}).evaluate(-1.0) - (-0.425)) < 1e-15);
    CHECK_THROWS(PolynomialCurve(0.0, {}));
    CHECK_THROWS(PolynomialCurve(-1.0, {}));
}

TEST_CASE("critical radius")
{
    CHECK(PolynomialCurve(1.0, {}).critical_radius() == 0.0);
    for (double r : {0.1, 1.0, 3.0}) {
        PolynomialCurve e(r, {0.0, 2.0 * 0.25 * r});
        CHECK(std::abs(e.critical_radius() - std::sqrt(0.5)) < 1e-12);
    }
    // h' = r - 2 a2 w^-3 vanishes at |w| = (2|a2|/r)^(1/3).
    PolynomialCurve k(0.5, {0.0, 0.0, cplx(0.03, 0.04)});
    CHECK(std::abs(k.critical_radius() - std::cbrt(2 * 0.05 / 0.5)) < 1e-12);
}

TEST_CASE("validity predicates")
{
    CHECK(is_simple_positively_oriented(PolynomialCurve(1.0, {})));
    CHECK(is_simple_positively_oriented(PolynomialCurve(0.3, {0.0, 0.3 * 0.5})));
    CHECK(encloses_origin(PolynomialCurve(1.0, {})));
    CHECK_FALSE(encloses_origin(PolynomialCurve(1.0, {2.0})));
    // Three-cusped family past the embedding bound r = 2|a2|.
    CHECK_FALSE(is_simple_positively_oriented(PolynomialCurve(1.0, {0.0, 0.0, 0.6})));
    CHECK(is_simple_positively_oriented(PolynomialCurve(1.0, {0.0, 0.0, 0.45})));
    // Negatively oriented parametrization r w with a large 1/w term.
    CHECK_FALSE(is_simple_positively_oriented(PolynomialCurve(1.0, {0.0, 2.0})));
}

TEST_CASE("forward moments, closed forms")
{
    auto m = forward_moments(PolynomialCurve(1.0, {0.0, 0.2}));
    CHECK(std::abs(m.t0 - 0.96) < 1e-15);
    CHECK(std::abs(m(1)) < 1e-15);
    CHECK(std::abs(m(2) - 0.1) < 1e-14);

    m = forward_moments(PolynomialCurve(1.0, {0.1}));
    CHECK(std::abs(m.t0 - 1.0) < 1e-15);
    CHECK(std::abs(m(1) - 0.1) < 1e-15);

    m = forward_moments(PolynomialCurve(0.5, {0.0, 0.0, 0.075}));
    CHECK(std::abs(m.t0 - 0.23875) < 1e-15);
    CHECK(std::abs(m(3) - 0.1) < 1e-14);
    CHECK(std::abs(m(2)) < 1e-15);

    // Complex coefficients: 2 t2 = conj(a1) / r.
    PolynomialCurve e(0.7, {0.0, cplx(0.1, 0.2)});
    CHECK(std::abs(forward_moments(e)(2) - std::conj(cplx(0.1, 0.2)) / (2 * 0.7)) < 1e-14);
}

TEST_CASE("residue agrees with contour quadrature, degree bound")
{
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const auto c = random_valid_curve(rng, trial % 6);
        const int n = c.degree();
        const auto m = forward_moments(c);
        for (int j = 1; j <= n + 3; ++j) {
            const auto q = forward_moments_quadrature(c, j);
            REQUIRE(q.converged);
            CHECK(std::abs(q.value - m(j)) < 1e-8);
            if (j >= n + 2) {
                CHECK(std::abs(moment_by_residue(c, j, default_series_order(n))) < 1e-10);
                CHECK(std::abs(q.value) < 1e-10);
            }
        }
        CHECK(std::abs(forward_moments_quadrature(c, 0).value - m.t0) < 1e-8);
    }
    CHECK(std::abs(forward_moments_quadrature(PolynomialCurve(1.0, {}), 1).value) < 1e-12);
    CHECK(std::abs(forward_moments_quadrature(PolynomialCurve(1.0, {0.0, 0.2}), 2).value - 0.1) < 1e-10);
}

TEST_CASE("area equals pi t0")
{
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        const auto c = random_valid_curve(rng, trial % 6);
        const double area = green_area(c, 256);
        CHECK(std::abs(area - M_PI * forward_moments(c).t0) / area < 1e-8);
    }
}

TEST_CASE("Schwarz function and reflection")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        const auto c = random_valid_curve(rng, 1 + trial % 5);
        const double R = c.critical_radius();
        const double eps = 0.05 * (1.0 - R);
        for (int s = 0; s < 10; ++s) {
            const double rad = (R + eps) + u(rng) * (1.0 / std::max(R, 1e-3) - 2 * eps - R);
            if (rad > 1.0 / std::max(R, 1e-3) - eps)
                continue;
            const cplx w = std::polar(rad, 2.0 * M_PI * u(rng));
            const cplx z = c.evaluate(w);
            // Only points whose preimage is the unique one near w are checked.
            auto back = invert(c, z, R, 1.0 / std::max(R, 1e-3));
            if (!back || std::abs(*back - w) > 1e-8)
                continue;
            CHECK(std::abs(schwarz(c, z) - c.evaluate_conjugate(1.0 / w)) < 1e-10);
            if (rad > 1.0 / (1.0 / std::max(R, 1e-3) - eps) && rad < 1.0 / (R + eps)) {
                const cplx twice = reflection(c, reflection(c, z));
                CHECK(std::abs(twice - z) < 1e-8);
            }
        }
    }

    // Circle: S(z) = r^2 / z.
    PolynomialCurve circle(0.5, {});
    CHECK(std::abs(schwarz(circle, 1.0) - 0.25) < 1e-14);
    CHECK(std::abs(reflection(circle, 1.0) - 0.25) < 1e-14);
    // Points of the curve are fixed.
    PolynomialCurve e(1.0, {0.0, 0.5});
    CHECK(std::abs(schwarz(e, 1.5) - 1.5) < 1e-12);
    const cplx on = e.evaluate(std::polar(1.0, 0.7));
    CHECK(std::abs(reflection(e, on) - on) < 1e-12);
    CHECK_THROWS_AS(schwarz(e, 0.0), ReflectionDomainError);
}

TEST_CASE("interior moments")
{
    auto v = interior_moments(PolynomialCurve(0.5, {}), 4);
    CHECK(v.agree);
    CHECK(std::abs(v.v[0] - 0.25) < 1e-15);
    for (int k = 1; k <= 4; ++k)
        CHECK(std::abs(v.v[static_cast<std::size_t>(k)]) < 1e-15);

    auto e = interior_moments(PolynomialCurve(1.0, {0.0, 0.5}), 3);
    CHECK(e.agree);
    CHECK(std::abs(e.v[2] - 0.375) < 1e-12);
    CHECK(std::abs(e.contour[2] - 0.375) < 1e-9);

    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const auto c = random_valid_curve(rng, trial % 6);
        auto im = interior_moments(c, 4);
        CHECK(im.agree);
        CHECK(std::abs(im.v[0] - forward_moments(c).t0) < 1e-12);
    }
}

TEST_CASE("containment")
{
    PolynomialCurve e(1.0, {0.0, 0.5});
    CHECK(contains(e, 0.0) == Containment::inside);
    CHECK(contains(e, e.evaluate(2.0)) == Containment::outside);
    CHECK(contains(e, e.evaluate(1.0)) == Containment::boundary);
    CHECK(contains(e, e.evaluate(std::polar(1.0, 2.1))) == Containment::boundary);
    CHECK(contains(e, 1.5 * (1 - 1e-6)) == Containment::inside);
    CHECK(contains(e, 1.5 * (1 + 1e-6)) == Containment::outside);
    CurveOutline o(e);
    CHECK(o.winding_number(0.0) == 1);
    CHECK(o.winding_number(5.0) == 0);
    CHECK(o.tangent_winding() == 1);
    CHECK_FALSE(o.self_intersects());
}

TEST_CASE("translation covariance")
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const auto c = random_valid_curve(rng, 1 + trial % 5);
        // Small shifts keep the origin inside, where the residue at infinity and
        // the unit-circle contour integral coincide.
        const cplx delta = std::polar(0.02 * trial * c.r(), 0.9 * trial);
        const auto s = c.translated(delta);
        REQUIRE(encloses_origin(s));
        const auto m = forward_moments(s);
        for (int j = 1; j <= c.degree() + 2; ++j) {
            auto q = forward_moments_quadrature(s, j);
            CHECK(std::abs(m(j) - q.value) < 1e-8);
        }
        CHECK(std::abs(m.t0 - forward_moments(c).t0) < 1e-14);
    }
}

}
