#pragma once

// Polynomial curves h(w) = r w + a_0 + a_1/w + ... + a_n/w^n restricted to |w| = 1,
// their exterior harmonic moments, Schwarz function and interior moments.

#include "nmm/laurent.hpp"

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace nmm {

/// Exterior harmonic moments (t0; t_1 .. t_{n+1}). t[k] holds t_{k+1}.
struct MomentVector {
    double t0 = 0.0;
    std::vector<cplx> t;

    /// t_j for j >= 1 (zero past the stored range).
    cplx operator()(int j) const
    {
        return (j >= 1 && static_cast<std::size_t>(j) <= t.size()) ? t[static_cast<std::size_t>(j - 1)] : cplx{};
    }
    int degree() const { return t.empty() ? 0 : static_cast<int>(t.size()) - 1; }
};

class PolynomialCurve {
public:
    /// Throws std::invalid_argument unless r is finite and positive.
    PolynomialCurve(double r, std::vector<cplx> a);

    double r() const { return r_; }
    /// a_0 .. a_n (always at least a_0).
    const std::vector<cplx>& a() const { return a_; }
    int degree() const { return static_cast<int>(a_.size()) - 1; }

    /// h(w); w = 0 is rejected with std::domain_error.
    cplx evaluate(cplx w) const;
    cplx derivative(cplx w) const;
    /// h with conjugated coefficients, evaluated at w.
    cplx evaluate_conjugate(cplx w) const;

    /// Largest modulus of a zero of h', 0 for a circle.
    double critical_radius() const { return critical_radius_; }

    /// h as an exact Laurent polynomial.
    LaurentSeries series() const;

    PolynomialCurve translated(cplx delta) const;

private:
    double r_;
    std::vector<cplx> a_;
    double critical_radius_;
};

double critical_radius(const PolynomialCurve& c);

/// Largest root modulus of a complex polynomial sum_k coeffs[k] x^k
/// (companion-matrix eigenvalues). Leading coefficient must be nonzero.
double max_root_modulus(const std::vector<cplx>& coeffs);

// ---------------------------------------------------------------------------
// Moments

/// Exterior harmonic moments from the residue formula. t_0 uses the closed
/// form r^2 - sum j |a_j|^2. For curves that do not enclose the origin this is
/// the polynomial continuation of the same formula.
MomentVector forward_moments(const PolynomialCurve& c);

/// t_j (j >= 0) from the residue formula at an explicit working order.
/// Throws std::domain_error if the order cannot resolve the residue.
cplx moment_by_residue(const PolynomialCurve& c, int j, int order);

/// Default Laurent working order for a curve of degree n.
int default_series_order(int n);

struct ContourResult {
    cplx value;
    double error = 0.0;
    std::size_t nodes = 0;
    bool converged = false;
};

/// t_j by trapezoidal quadrature of conj(h)(1/w) h'(w) h(w)^-j on |w| = radius,
/// doubling the node count until successive results differ by at most
/// tol * (1 + mean |integrand|).
ContourResult forward_moments_quadrature(const PolynomialCurve& c, int j, double radius = 1.0,
                                         double tol = 1e-13);

// ---------------------------------------------------------------------------
// Schwarz function and reflection

class ReflectionDomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Solve h(w) = z with inner < |w| < outer by Newton iteration seeded at
/// (z - a_0)/r, falling back to rings of seeds.
std::optional<cplx> invert(const PolynomialCurve& c, cplx z, double inner, double outer);

/// S(z) = conj(h)(1 / h^-1(z)) on the annulus image R < |w| < 1/R.
/// Throws ReflectionDomainError outside it.
cplx schwarz(const PolynomialCurve& c, cplx z);
cplx reflection(const PolynomialCurve& c, cplx z);

struct InteriorMoments {
    std::vector<cplx> v;        ///< residue route, v_0 .. v_kmax
    std::vector<cplx> contour;  ///< Green's-theorem quadrature route
    double max_discrepancy = 0.0;
    bool agree = true;
};

/// v_k = (1/pi) int_{D+} z^k d^2z for k = 0..kmax, cross-checked by two routes.
InteriorMoments interior_moments(const PolynomialCurve& c, int kmax, double tol = 1e-9);

// ---------------------------------------------------------------------------
// Geometry of the sampled boundary

enum class Containment { inside, outside, boundary };

const char* to_string(Containment c);

class CurveOutline {
public:
    explicit CurveOutline(const PolynomialCurve& c, std::size_t samples = 4096);

    /// Tri-state classification; the boundary band is band_rel * diameter().
    Containment classify(cplx z, double band_rel = 1e-9) const;
    int winding_number(cplx z) const;
    bool self_intersects() const;
    /// Winding of the tangent i w h'(w) around the unit circle.
    int tangent_winding() const;
    double diameter() const { return diameter_; }
    const std::vector<cplx>& points() const { return pts_; }
    const PolynomialCurve& curve() const { return curve_; }
    /// Axis-aligned bounding box (xmin, xmax, ymin, ymax).
    std::array<double, 4> bounds() const { return bounds_; }

private:
    PolynomialCurve curve_;
    std::vector<cplx> pts_;
    double diameter_ = 0.0;
    double sagitta_ = 0.0;
    std::array<double, 4> bounds_{};
};

bool is_simple_positively_oriented(const PolynomialCurve& c, std::size_t samples = 4096);
bool encloses_origin(const PolynomialCurve& c);
Containment contains(const PolynomialCurve& c, cplx z, double band_rel = 1e-9);

} // namespace nmm
