#pragma once

#include "nmm/curve.hpp"

#include <random>
#include <vector>

namespace nmm::testing {

// Random curve with the requested degree, critical radius <= max_critical,
// simple, positively oriented and enclosing the origin.
inline PolynomialCurve random_valid_curve(std::mt19937_64& rng, int n, double max_critical = 0.8)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (;;) {
        // Split a budget sum_j j |a_j / r| 0.8^-(j+1) ~ 1 (Rouche bound for the
        // zeros of h' at radius 0.8) randomly among the coefficients.
        const double r = 0.2 + 0.8 * unit(rng);
        std::vector<double> share(static_cast<std::size_t>(n + 1));
        double total = 0.0;
        for (int j = 1; j <= n; ++j)
            total += share[static_cast<std::size_t>(j)] = unit(rng);
        const double budget = 1.3 * unit(rng);
        std::vector<cplx> a(static_cast<std::size_t>(n + 1));
        a[0] = std::polar(0.3 * r * std::sqrt(unit(rng)), 2.0 * M_PI * unit(rng));
        for (int j = 1; j <= n; ++j) {
            const double rad = budget * share[static_cast<std::size_t>(j)] / total *
                               std::pow(0.8, j + 1) / j;
            a[static_cast<std::size_t>(j)] = std::polar(rad * r, 2.0 * M_PI * unit(rng));
        }
        PolynomialCurve c(r, a);
        if (c.critical_radius() > max_critical)
            continue;
        if (!is_simple_positively_oriented(c) || !encloses_origin(c))
            continue;
        return c;
    }
}

// Enclosed area from (1/2) \oint Im(conj(z) dz), trapezoid rule in the angle.
inline double green_area(const PolynomialCurve& c, int m)
{
    double s = 0.0;
    for (int k = 0; k < m; ++k) {
        const cplx w = std::polar(1.0, 2.0 * M_PI * k / m);
        s += (std::conj(c.evaluate(w)) * c.derivative(w) * cplx(0.0, 1.0) * w).imag();
    }
    return 0.5 * s * 2.0 * M_PI / m;
}

} // namespace nmm::testing
