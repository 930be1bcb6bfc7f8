#include <doctest.h>

#include "nmm/domain.hpp"

using namespace nmm;

TEST_SUITE("domain") {

TEST_CASE("disk and polygon membership")
{
    auto d = DomainSpec::disk({1.0, 0.0}, 0.5);
    CHECK(d.contains(1.0));
    CHECK(d.contains(1.5));
    CHECK_FALSE(d.contains(1.51));
    CHECK(d.bounds()[0] == 0.5);

    auto sq = DomainSpec::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    CHECK(sq.contains({0.5, 0.5}));
    CHECK(sq.contains({1.0, 0.5}));
    CHECK_FALSE(sq.contains({1.5, 0.5}));
    CHECK_THROWS_AS(DomainSpec::disk(0.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(DomainSpec::polygon({{0, 0}, {1, 0}}), std::invalid_argument);
}

TEST_CASE("default domain")
{
    // Only t3: t0 V = |z|^2 - 0.2 Re z^3 first vanishes at |z| = 5.
    auto d = default_domain(MomentVector{100.0, {0.0, 0.0, 0.1}}, 0.0);
    CHECK(d.radius <= 0.95 * 5.0);
    CHECK(d.radius > 0.95 * 5.0 - 0.03);
    // Positive everywhere: capped at 5 sqrt(t0).
    auto c = default_domain(MomentVector{0.04, {0.0, 0.25}}, 0.0);
    CHECK(std::abs(c.radius - 1.0) < 1e-15);
    auto k = default_domain(MomentVector{0.01, {0.0, 0.0, 0.1}}, 0.0);
    CHECK(std::abs(k.radius - 0.5) < 1e-15);
}

}
