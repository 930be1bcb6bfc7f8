#include <doctest.h>

#include "nmm/laurent.hpp"

#include <random>

using namespace nmm;

namespace {

LaurentSeries random_series(std::mt19937_64& rng, int lo, int hi)
{
    std::normal_distribution<double> g;
    std::vector<cplx> c;
    for (int e = lo; e <= hi; ++e)
        c.emplace_back(g(rng), g(rng));
    return LaurentSeries::exact(lo, c);
}

} // namespace

TEST_SUITE("laurent") {

TEST_CASE("addition")
{
    auto a = LaurentSeries::exact(0, {1.0, 1.0});
    auto b = LaurentSeries::monomial(1.0, -1);
    auto s = a + b;
    CHECK(s.lo() == -1);
    CHECK(s.hi() == 1);
    CHECK(s[-1] == cplx(1.0));
    CHECK(s[0] == cplx(1.0));
    CHECK(s[1] == cplx(1.0));

    CHECK(max_abs_difference(a + LaurentSeries(), a) == 0.0);

    auto c = LaurentSeries::monomial(2.0, 1) + LaurentSeries::monomial(-2.0, 1);
    CHECK(c.is_zero());
}

TEST_CASE("multiplication")
{
    auto p = LaurentSeries::exact(-1, {1.0, 0.0, 1.0});
    auto m = LaurentSeries::exact(-1, {-1.0, 0.0, 1.0});
    auto q = p * m;
    CHECK(q[2] == cplx(1.0));
    CHECK(q[0] == cplx(0.0));
    CHECK(q[-2] == cplx(-1.0));
    CHECK(q.lo() == -2);
    CHECK(q.hi() == 2);

    CHECK(max_abs_difference(p * LaurentSeries::constant(1.0), p) == 0.0);

    // (1 + 1/w) times the geometric series cut at w^-5.
    auto one_plus = LaurentSeries::exact(-1, {1.0, 1.0});
    auto geo = LaurentSeries::truncated(-5, {-1.0, 1.0, -1.0, 1.0, -1.0, 1.0});
    auto prod = one_plus * geo;
    REQUIRE(prod.truncation().has_value());
    CHECK(*prod.truncation() == -5);
    CHECK(prod[0] == cplx(1.0));
    for (int e = -5; e < 0; ++e)
        CHECK(std::abs(prod[e]) == 0.0);
    CHECK_THROWS_AS((void)prod[-6], std::out_of_range);
}

TEST_CASE("inverse powers")
{
    auto w = LaurentSeries::monomial(1.0, 1);
    auto w2 = inv_power(w, 2, 10);
    CHECK(w2.is_exact());
    CHECK(w2[-2] == cplx(1.0));

    auto a = LaurentSeries::exact(0, {1.0, 1.0}); // w (1 + 1/w)
    auto g = inv_power(a, 1, 3);
    CHECK(g[-1] == cplx(1.0));
    CHECK(g[-2] == cplx(-1.0));
    CHECK(g[-3] == cplx(1.0));

    // Identity inv_power(a, j) * a^j = 1 inside the valid window. The lower
    // coefficients are kept below the leading one so the expansion converges.
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        const int top = 1 + trial % 3;
        auto s = 0.3 * random_series(rng, -4, top - 1) + LaurentSeries::monomial(cplx(1.0, 0.5), top);
        for (int j = 1; j <= 6; ++j) {
            auto inv = inv_power(s, j, 30);
            LaurentSeries prod = inv;
            for (int k = 0; k < j; ++k)
                prod = prod * s;
            REQUIRE(prod.truncation().has_value());
            CHECK(*prod.truncation() <= -10);
            double err = 0.0;
            for (int e = *prod.truncation(); e <= prod.hi(); ++e)
                err = std::max(err, std::abs(prod[e] - (e == 0 ? cplx(1.0) : cplx(0.0))));
            CHECK(err < 1e-9);
        }
    }
}

TEST_CASE("residue")
{
    CHECK(residue(LaurentSeries::exact(-1, {3.0, 0.0, 1.0})) == cplx(3.0));
    CHECK_THROWS_AS(residue(LaurentSeries::truncated(0, {1, 1, 1, 1, 1, 1})), std::domain_error);

    // Unit circle h = w: conj(h)(1/w) h' h^-1 = w^-2, no residue.
    auto h = LaurentSeries::monomial(1.0, 1);
    auto integrand = reflect_conjugate(h) * derivative(h) * inv_power(h, 1, 8);
    CHECK(residue(integrand) == cplx(0.0));

    // r = 1, a1 = 0.2: coefficient of 1/w in conj(h)(1/w) h' h^-2 is 2 t2 = conj(a1)/r.
    auto e = LaurentSeries::exact(-1, {0.2, 0.0, 1.0});
    auto two_t2 = residue(reflect_conjugate(e) * derivative(e) * inv_power(e, 2, 12));
    CHECK(std::abs(two_t2 - cplx(0.2)) < 1e-14);
}

TEST_CASE("ring axioms and rotation covariance")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 2.0 * M_PI);
    for (int trial = 0; trial < 20; ++trial) {
        auto a = random_series(rng, -3, 2);
        auto b = random_series(rng, -2, 3);
        auto c = random_series(rng, -1, 1);
        CHECK(max_abs_difference((a * b) * c, a * (b * c)) < 1e-12);
        CHECK(max_abs_difference(a * (b + c), a * b + a * c) < 1e-12);
        CHECK(max_abs_difference(a * b, b * a) < 1e-13);

        // Substituting w -> lambda w multiplies c_e by lambda^e; the residue of
        // the product picks up lambda^-1 and nothing else.
        const cplx lambda = std::polar(1.0, u(rng));
        auto rotate = [&](const LaurentSeries& s) {
            std::vector<cplx> out;
            for (int e = s.lo(); e <= s.hi(); ++e)
                out.push_back(s[e] * std::pow(lambda, e));
            return LaurentSeries::exact(s.lo(), out);
        };
        const cplx lhs = residue(rotate(a) * rotate(b));
        CHECK(std::abs(lhs - residue(a * b) / lambda) < 1e-12);
    }
}

TEST_CASE("reflection and derivative")
{
    auto s = LaurentSeries::exact(-1, {cplx(1, 2), 0.0, cplx(0, 3)});
    auto r = reflect_conjugate(s);
    CHECK(r[1] == cplx(1, -2));
    CHECK(r[-1] == cplx(0, -3));
    const cplx w(0.7, -0.4);
    CHECK(std::abs(r.evaluate(w) - std::conj(s.evaluate(1.0 / std::conj(w)))) < 1e-14);

    auto d = derivative(s);
    CHECK(d[-2] == cplx(-1, -2));
    CHECK(d[0] == cplx(0, 3));
}

}
