#pragma once

// Inverse moment problem: the polynomial curve with prescribed area pi*t0 and
// exterior harmonic moments t_1 .. t_{n+1}, by Newton iteration on the scaled
// parameters (rho = r^2, alpha_j = r^-j a_j) with continuation in t0.

#include "nmm/curve.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace nmm {

/// Raised when the moments lie outside the regime where a valid curve exists
/// (continuation breakdown near a cusp, self-intersection, several minima).
class RegimeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SolverConfig {
    double newton_tol = 1e-13;
    int max_newton_iters = 40;
    int continuation_steps = 8;
    double t0_start_fraction = 1.0 / 256.0;
    /// Bisections of a continuation step allowed after a Newton failure.
    int max_step_refinements = 8;
    /// Half-width of the square searched for minima of the potential.
    double minimum_search_radius = 1.0;

    void validate() const;
};

struct ScaledParams {
    double rho = 0.0;
    std::vector<cplx> alpha; ///< alpha_0 .. alpha_n
};

ScaledParams to_scaled(const PolynomialCurve& c);
PolynomialCurve from_scaled(const ScaledParams& p);

/// Small-area starting point: rho = t0, alpha_0 = 0, alpha_j = (j+1) conj(t_{j+1}).
/// Rejects |t_2| >= 1/2 with std::invalid_argument.
ScaledParams initial_guess(const MomentVector& t);

struct SolveReport {
    std::vector<int> iterations;  ///< Newton iterations per continuation step
    double residual = 0.0;        ///< max-norm moment residual of the returned curve
    double cusp_margin = 0.0;
    bool encloses_origin = false;
    cplx shift{};                 ///< origin shift applied by solve_shifted
};

struct SolveResult {
    PolynomialCurve curve;
    SolveReport report;
};

/// Checks t0 > 0, |t_2| < 1/2 and finiteness; throws std::invalid_argument.
void validate_moments(const MomentVector& t);

SolveResult solve(const MomentVector& t, const SolverConfig& cfg = {});

/// Local minima of U(z) = |z|^2 - 2 Re sum t_k z^k inside the square of
/// half-width radius, refined by Newton on the gradient.
std::vector<cplx> potential_minima(const MomentVector& t, double radius);

/// Moments of the potential re-expanded about z_star.
MomentVector recenter_moments(const MomentVector& t, cplx z_star);

/// Shift the origin to the unique minimum of U, solve, shift back.
SolveResult solve_shifted(const MomentVector& t, const SolverConfig& cfg = {});

/// 1 - critical radius.
double cusp_margin(const PolynomialCurve& c);

} // namespace nmm
