#include <doctest.h>

#include "nmm/analysis.hpp"
#include "nmm/moment_inverse.hpp"
#include "support.hpp"

#include <random>

using namespace nmm;

namespace {

// Frames of N independent points uniform on D+, i.e. exact draws from mu.
SampleSet iid_uniform(const PolynomialCurve& c, double t0, int n, int chains, int frames, std::uint64_t seed)
{
    const CurveOutline o(c);
    const auto b = o.bounds();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> x(b[0], b[1]), y(b[2], b[3]);
    SampleSet s;
    s.N = n;
    s.chains = chains;
    s.t0 = t0;
    for (int f = 0; f < frames; ++f)
        s.sweeps.push_back(f + 1);
    while (s.positions.size() < static_cast<std::size_t>(n) * chains * frames) {
        const cplx z(x(rng), y(rng));
        if (o.winding_number(z) != 0)
            s.positions.push_back(z);
    }
    s.stats.resize(static_cast<std::size_t>(chains));
    return s;
}

} // namespace

TEST_SUITE("analysis") {

TEST_CASE("strip index agrees with the outline winding number")
{
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int n : {1, 3, 5}) {
        auto c = nmm::testing::random_valid_curve(rng, n);
        const CurveOutline o(c);
        const RegionIndex idx(c);
        for (int i = 0; i < 2000; ++i) {
            const cplx z(u(rng), u(rng));
            CHECK(idx.winding_number(z) == o.winding_number(z));
        }
    }
}

TEST_CASE("histogram normalization")
{
    PolynomialCurve c(0.2, {});
    auto s = iid_uniform(c, 0.04, 10, 2, 50, 1);
    s.positions.push_back(5.0);  // off the grid
    auto d = histogram(s, {-0.25, 0.25, -0.25, 0.25}, 10, 10);
    CHECK(d.binned == 1000);
    CHECK(d.outside_grid == 1);
    double integral = 0;
    for (double v : d.density)
        integral += v * d.cell_area();
    CHECK(std::abs(integral - 1.0) < 1e-12);
    CHECK_THROWS_AS(histogram(s, {0, 0, 0, 1}, 10, 10), std::invalid_argument);
}

TEST_CASE("bulk density of exact draws")
{
    const double t0 = 0.04;
    PolynomialCurve c(std::sqrt(t0), {});
    auto s = iid_uniform(c, t0, 100, 4, 500, 3);
    auto d = histogram(s, {-0.25, 0.25, -0.25, 0.25}, 25, 25);
    auto bd = bulk_density(d, c, t0);
    CHECK(bd.bins > 50);
    CHECK(std::abs(bd.mean / bd.expected - 1.0) < 0.02);
}

TEST_CASE("support fraction")
{
    const double t0 = 0.04;
    auto c = solve(MomentVector{t0, {0.0, 0.25}}).curve;
    auto s = iid_uniform(c, t0, 20, 2, 100, 4);
    CHECK(support_fraction(s, c, 1.0) == 1.0);
    CHECK(support_fraction(s, c, std::numeric_limits<double>::infinity()) == 1.0);
    const double half = support_fraction(s, c, 1.0 / std::sqrt(2.0));
    CHECK(std::abs(half - 0.5) < 0.03);
    CHECK_THROWS_AS(support_fraction(s, c, 0.0), std::invalid_argument);
    CHECK(std::abs(centroid(c)) < 1e-12);
}

TEST_CASE("moment estimates")
{
    const double t0 = 0.07;
    std::mt19937_64 rng(11);
    auto c = nmm::testing::random_valid_curve(rng, 2);
    // Rescale so the area is pi t0.
    const double area = nmm::testing::green_area(c, 4096);
    const double lam = std::sqrt(M_PI * t0 / area);
    std::vector<cplx> a = c.a();
    for (auto& x : a)
        x *= lam;
    c = PolynomialCurve(c.r() * lam, a);
    auto s = iid_uniform(c, t0, 3, 6, 400, 12);
    auto m0 = moment_estimate(s, 0);
    CHECK(m0.mean == cplx(t0, 0.0));
    const auto v = interior_moments(c, 3).v;
    CHECK(std::abs(v[0] - t0) < 1e-9);
    for (int k = 1; k <= 3; ++k) {
        auto e = moment_estimate(s, k);
        REQUIRE(e.standard_error);
        CHECK(std::abs(e.mean.real() - v[k].real()) < 4 * (*e.standard_error)[0]);
        CHECK(std::abs(e.mean.imag() - v[k].imag()) < 4 * (*e.standard_error)[1]);
    }
    s.chains = 1;
    s.positions.resize(3 * 400);
    CHECK_FALSE(moment_estimate(s, 1).standard_error);
}

TEST_CASE("equilibrium integrals: fan quadrature against Green's theorem")
{
    std::mt19937_64 rng(6);
    for (int n = 0; n <= 4; ++n) {
        auto c = nmm::testing::random_valid_curve(rng, n);
        const double t0 = forward_moments(c).t0;
        CHECK(std::abs(equilibrium_integral(c, t0, [](cplx) { return 1.0; }) - 1.0) < 1e-12);
        for (int a = 0; a <= 3; ++a) {
            for (int b = 0; a + b <= 3; ++b) {
                const cplx g = equilibrium_monomial(c, t0, a, b);
                auto re = [a, b](cplx z) { return (std::pow(z, a) * std::pow(std::conj(z), b)).real(); };
                auto im = [a, b](cplx z) { return (std::pow(z, a) * std::pow(std::conj(z), b)).imag(); };
                CHECK(std::abs(equilibrium_integral(c, t0, re) - g.real()) < 1e-12);
                CHECK(std::abs(equilibrium_integral(c, t0, im) - g.imag()) < 1e-12);
            }
        }
        // Holomorphic monomials give v_k / t0.
        const auto v = interior_moments(c, 3).v;
        for (int k = 0; k <= 3; ++k)
            CHECK(std::abs(equilibrium_monomial(c, t0, k, 0) * t0 - v[k]) < 1e-12);
    }
}

TEST_CASE("weak convergence of exact draws")
{
    const double t0 = 0.04;
    auto c = solve(MomentVector{t0, {0.0, 0.2, 0.05}}).curve;
    auto s = iid_uniform(c, t0, 64, 8, 200, 9);
    const auto fs = standard_test_functions(c, t0);
    CHECK(fs.size() == 14);
    auto res = weak_convergence_test(s, c, fs);
    REQUIRE(res.size() == fs.size());
    for (const auto& e : res) {
        REQUIRE(e.z_score);
        CHECK(std::abs(*e.z_score) < 4.5);
    }
}

}
