#pragma once

// The external potential V, the energy field E(z) = V(z) + 2 U^mu(z) + const of
// the uniform measure on the interior of a polynomial curve, and the checks of
// the variational characterization built on it.

#include "nmm/curve.hpp"
#include "nmm/domain.hpp"

#include <limits>
#include <string>
#include <vector>

namespace nmm {

class Potential {
public:
    Potential(double t0, std::vector<cplx> t);
    explicit Potential(const MomentVector& m) : Potential(m.t0, m.t) {}

    double t0() const { return t0_; }
    const std::vector<cplx>& t() const { return t_; }
    MomentVector moments() const { return {t0_, t_}; }

    /// V(z) = (|z|^2 - 2 Re sum t_k z^k) / t0
    double value(cplx z) const { return scaled(z) / t0_; }
    /// t0 V(z)
    double scaled(cplx z) const;

private:
    double t0_;
    std::vector<cplx> t_;
};

double potential_value(const Potential& p, cplx z);

struct QuadratureOptions {
    /// Relative tolerance per angular panel (Gauss-Kronrod 7/15).
    double panel_tol = 1e-12;
    int panels = 128;
    int max_depth = 12;
    /// Absolute tolerance on E above which energy_quadrature throws.
    double tol = 1e-6;
};

struct QuadratureValue {
    double value = 0.0;
    double error = 0.0;
};

/// Energy field of a fixed (potential, curve) pair. The area integral over the
/// interior D+ is reduced to a periodic integral along the curve by sweeping
/// D+ with segments from the evaluation point to h(e^{i theta}) (signed by the
/// winding number, so valid for non-convex curves and for exterior points);
/// the radial log integral is done in closed form.
class EnergyField {
public:
    EnergyField(Potential p, PolynomialCurve c, QuadratureOptions opt = {});

    const Potential& potential() const { return p_; }
    const PolynomialCurve& curve() const { return c_; }

    /// L(z) = int_{D+} log|z - zeta| d^2 zeta
    QuadratureValue log_potential(cplx z) const;

    /// E(z) by quadrature; valid everywhere.
    QuadratureValue quadrature(cplx z) const;

    /// E(h(w)) for |w| >= 1 from the antiderivative of conj(h)(1/w) h'(w).
    double exterior_closed_form(cplx w) const;

    /// E at an exterior point z via w = h^-1(z), |w| > 1. Throws
    /// ReflectionDomainError if the inversion fails.
    double exterior_closed_form_at(cplx z) const;

private:
    Potential p_;
    PolynomialCurve c_;
    QuadratureOptions opt_;
    QuadratureValue l0_;
    LaurentSeries antiderivative_; // exponent -1 dropped
    double log_coefficient_ = 0.0;
    double h1_norm_ = 0.0;
    cplx f1_{};
};

/// E(z) by quadrature; throws std::runtime_error if the error estimate exceeds opt.tol.
double energy_quadrature(const Potential& p, const PolynomialCurve& c, cplx z, const QuadratureOptions& opt = {});
double energy_exterior_closed_form(const Potential& p, const PolynomialCurve& c, cplx w);

struct GradientCheck {
    cplx lhs;  ///< central-difference Wirtinger derivative of E
    cplx rhs;  ///< (z - rho(z)) / t0
    double relative_error = 0.0;
};

/// Compares d/dzbar E with (z - rho(z)) / t0 at an exterior point of the
/// reflection annulus. Propagates ReflectionDomainError.
GradientCheck gradient_check(const Potential& p, const PolynomialCurve& c, cplx z);
GradientCheck gradient_check(const EnergyField& field, cplx z);

// ---------------------------------------------------------------------------
// Field grid and variational verification

enum class NodeClass { inside, outside, boundary, excluded };
const char* to_string(NodeClass c);

struct FieldGrid {
    std::array<double, 4> bounds{}; ///< xmin, xmax, ymin, ymax
    int nx = 0, ny = 0;
    std::vector<double> values;     ///< row-major, index iy * nx + ix; NaN when excluded
    std::vector<NodeClass> classes;
    std::vector<double> errors;     ///< quadrature error estimates

    cplx node(int ix, int iy) const;
};

struct VerifyOptions {
    int nx = 200, ny = 200;
    double interior_tol = 1e-6;
    double exterior_tol = 1e-6;
    double band_rel = 1e-9;
    unsigned threads = 1;
    QuadratureOptions quadrature{};
};

struct VerifyReport {
    double max_interior_abs = 0.0;
    double interior_mean = 0.0;   ///< measured E0
    double min_exterior = std::numeric_limits<double>::infinity();
    double max_quadrature_error = 0.0;
    /// min of t0 V(z) / |z - z*|^2 over grid nodes of D away from the minimizer z*
    double min_potential_ratio = std::numeric_limits<double>::infinity();
    int interior_nodes = 0, exterior_nodes = 0, boundary_nodes = 0, excluded_nodes = 0;
    bool curve_inside_domain = false;
    bool interior_pass = false, exterior_pass = false;
    bool pass = false;
};

FieldGrid field_grid(const EnergyField& field, const DomainSpec& domain, const VerifyOptions& opt);
VerifyReport verify_field(const FieldGrid& grid, const EnergyField& field, const DomainSpec& domain,
                          const VerifyOptions& opt, cplx minimizer = {});

struct VariationalResult {
    FieldGrid grid;
    VerifyReport report;
};

VariationalResult variational_verify(const Potential& p, const PolynomialCurve& c, const DomainSpec& domain,
                                     const VerifyOptions& opt = {});

// ---------------------------------------------------------------------------
// Discrete and continuum energies

struct DiscreteEnergy {
    double H = 0.0;  ///< N sum V(z_i) - 2 sum_{i<j} log|z_i - z_j|
    double I = 0.0;  ///< H / N^2
};

/// Coincident points give H = I = +infinity.
DiscreteEnergy discrete_energy(const Potential& p, const std::vector<cplx>& z);

struct EquilibriumEnergy {
    double value = 0.0;        ///< int V dmu + int int log|z - zeta|^-1 dmu dmu
    double identity = 0.0;     ///< (1/2) int V dmu - (1/pi t0) int_{D+} log|zeta|
    double potential_term = 0.0;
};

/// I0 = I(mu) for mu uniform on D+, by two-dimensional quadrature, with the
/// cross-check from E = 0 on D+.
EquilibriumEnergy equilibrium_energy(const EnergyField& field, int angular = 96);

/// I(mu) for mu = sum_i w_i (uniform disk of radius eps at c_i), exact for
/// separations >= 2 eps. Throws std::invalid_argument otherwise.
double smeared_log_energy(const Potential& p, const std::vector<cplx>& centers, const std::vector<double>& weights,
                          double eps);

/// f(x) = (x - 1)(1 + alpha / x) - (1 + alpha) log x on 0 <= alpha <= 1, x >= 1.
double gaussian_positivity_lemma(double alpha, double x);

} // namespace nmm
