#include "nmm/curve.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace nmm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

cplx unit(double theta)
{
    return {std::cos(theta), std::sin(theta)};
}

} // namespace

// ---------------------------------------------------------------------------
// PolynomialCurve

PolynomialCurve::PolynomialCurve(double r, std::vector<cplx> a) : r_(r), a_(std::move(a))
{
    if (!(r > 0.0) || !std::isfinite(r))
        throw std::invalid_argument("PolynomialCurve: r must be finite and positive");
    if (a_.empty())
        a_.push_back(cplx{});
    for (const auto& v : a_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::invalid_argument("PolynomialCurve: non-finite coefficient");

    // w^{n+1} h'(w) = r w^{n+1} - sum_j j a_j w^{n-j}
    const int n = degree();
    std::vector<cplx> q(static_cast<std::size_t>(n + 2));
    q[static_cast<std::size_t>(n + 1)] = r_;
    for (int j = 1; j <= n; ++j)
        q[static_cast<std::size_t>(n - j)] = -static_cast<double>(j) * a_[static_cast<std::size_t>(j)];
    critical_radius_ = max_root_modulus(q);
}

cplx PolynomialCurve::evaluate(cplx w) const
{
    if (w == cplx{})
        throw std::domain_error("PolynomialCurve::evaluate: w = 0");
    const cplx x = 1.0 / w;
    cplx acc{};
    for (auto it = a_.rbegin(); it != a_.rend(); ++it)
        acc = acc * x + *it;
    return r_ * w + acc;
}

cplx PolynomialCurve::derivative(cplx w) const
{
    if (w == cplx{})
        throw std::domain_error("PolynomialCurve::derivative: w = 0");
    const cplx x = 1.0 / w;
    // h'(w) = r - sum_j j a_j x^{j+1}
    cplx acc{};
    for (int j = degree(); j >= 1; --j)
        acc = (acc + static_cast<double>(j) * a_[static_cast<std::size_t>(j)]) * x;
    return r_ - acc * x;
}

cplx PolynomialCurve::evaluate_conjugate(cplx w) const
{
    if (w == cplx{})
        throw std::domain_error("PolynomialCurve::evaluate_conjugate: w = 0");
    const cplx x = 1.0 / w;
    cplx acc{};
    for (auto it = a_.rbegin(); it != a_.rend(); ++it)
        acc = acc * x + std::conj(*it);
    return r_ * w + acc;
}

LaurentSeries PolynomialCurve::series() const
{
    const int n = degree();
    std::vector<cplx> c(static_cast<std::size_t>(n + 2));
    for (int j = 0; j <= n; ++j)
        c[static_cast<std::size_t>(n - j)] = a_[static_cast<std::size_t>(j)];
    c[static_cast<std::size_t>(n + 1)] = r_;
    return LaurentSeries::exact(-n, std::move(c));
}

PolynomialCurve PolynomialCurve::translated(cplx delta) const
{
    auto a = a_;
    a[0] += delta;
    return PolynomialCurve(r_, std::move(a));
}

double critical_radius(const PolynomialCurve& c)
{
    return c.critical_radius();
}

double max_root_modulus(const std::vector<cplx>& coeffs)
{
    std::size_t deg = coeffs.size();
    while (deg > 0 && coeffs[deg - 1] == cplx{})
        --deg;
    if (deg <= 1)
        return 0.0;
    const int m = static_cast<int>(deg) - 1;
    const cplx lead = coeffs[deg - 1];

    // Trailing zero coefficients are roots at the origin.
    int zeros = 0;
    while (zeros < m && coeffs[static_cast<std::size_t>(zeros)] == cplx{})
        ++zeros;
    const int k = m - zeros;
    if (k == 0)
        return 0.0;

    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(k, k);
    for (int i = 1; i < k; ++i)
        companion(i, i - 1) = 1.0;
    for (int i = 0; i < k; ++i)
        companion(i, k - 1) = -coeffs[static_cast<std::size_t>(zeros + i)] / lead;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    double best = 0.0;
    for (int i = 0; i < k; ++i)
        best = std::max(best, std::abs(solver.eigenvalues()(i)));
    return best;
}

// ---------------------------------------------------------------------------
// Moments

int default_series_order(int n)
{
    return (n + 1) + 4 * (n + 2);
}

namespace {

// conj(h)(1/w) h'(w) as an exact Laurent polynomial.
LaurentSeries moment_base(const PolynomialCurve& c)
{
    const LaurentSeries h = c.series();
    return reflect_conjugate(h) * derivative(h);
}

} // namespace

cplx moment_by_residue(const PolynomialCurve& c, int j, int order)
{
    if (j < 0)
        throw std::invalid_argument("moment_by_residue: j must be non-negative");
    const LaurentSeries base = moment_base(c);
    if (j == 0)
        return residue(base);
    const LaurentSeries integrand = base * inv_power(c.series(), j, order);
    return residue(integrand) / static_cast<double>(j);
}

MomentVector forward_moments(const PolynomialCurve& c)
{
    const int n = c.degree();
    const int order = default_series_order(n);
    MomentVector out;
    out.t0 = c.r() * c.r();
    for (int j = 1; j <= n; ++j)
        out.t0 -= static_cast<double>(j) * std::norm(c.a()[static_cast<std::size_t>(j)]);

    const LaurentSeries hinv = inv_power(c.series(), 1, order);
    LaurentSeries integrand = moment_base(c);
    out.t.resize(static_cast<std::size_t>(n + 1));
    for (int j = 1; j <= n + 1; ++j) {
        integrand = integrand * hinv;
        out.t[static_cast<std::size_t>(j - 1)] = residue(integrand) / static_cast<double>(j);
    }
    return out;
}

ContourResult forward_moments_quadrature(const PolynomialCurve& c, int j, double radius, double tol)
{
    if (j < 0)
        throw std::invalid_argument("forward_moments_quadrature: j must be non-negative");
    if (!(radius >= 1.0))
        throw std::invalid_argument("forward_moments_quadrature: radius must be >= 1");

    auto integrand = [&](cplx w) {
        cplx f = c.evaluate_conjugate(1.0 / w) * c.derivative(w) * w;
        if (j > 0)
            f *= std::pow(c.evaluate(w), -j);
        return f;
    };
    auto trapezoid = [&](std::size_t m, double& mean_abs) {
        cplx sum{};
        mean_abs = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            cplx f = integrand(radius * unit(kTwoPi * static_cast<double>(k) / static_cast<double>(m)));
            sum += f;
            mean_abs += std::abs(f);
        }
        mean_abs /= static_cast<double>(m);
        return sum / static_cast<double>(m);
    };

    ContourResult res;
    std::size_t m = 32;
    double mean_abs = 0.0;
    cplx prev = trapezoid(m, mean_abs);
    const double scale = j > 0 ? static_cast<double>(j) : 1.0;
    for (m = 64; m <= (std::size_t{1} << 20); m *= 2) {
        cplx cur = trapezoid(m, mean_abs);
        res.error = std::abs(cur - prev) / scale;
        res.value = cur / scale;
        res.nodes = m;
        if (std::abs(cur - prev) <= tol * (1.0 + mean_abs)) {
            res.converged = true;
            return res;
        }
        prev = cur;
    }
    return res;
}

// ---------------------------------------------------------------------------
// Inversion, Schwarz function

namespace {

std::optional<cplx> newton_invert(const PolynomialCurve& c, cplx z, cplx seed, double inner, double outer)
{
    double scale = std::abs(z) + c.r();
    for (const auto& a : c.a())
        scale += std::abs(a);
    cplx w = seed;
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
        if (std::abs(w) < 1e-300)
            return std::nullopt;
        const cplx f = c.evaluate(w) - z;
        const cplx d = c.derivative(w);
        if (d == cplx{})
            return std::nullopt;
        cplx dw = f / d;
        // Keep the iterate away from the pole at w = 0.
        const double limit = 0.5 * std::abs(w);
        if (std::abs(dw) > limit)
            dw *= limit / std::abs(dw);
        w -= dw;
        if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
            return std::nullopt;
        if (std::abs(dw) <= 1e-15 * std::abs(w)) {
            converged = true;
            break;
        }
    }
    if (!converged && std::abs(c.evaluate(w) - z) > 1e-12 * scale)
        return std::nullopt;
    if (std::abs(c.evaluate(w) - z) > 1e-11 * scale)
        return std::nullopt;
    const double m = std::abs(w);
    if (!(m > inner && m < outer))
        return std::nullopt;
    return w;
}

} // namespace

std::optional<cplx> invert(const PolynomialCurve& c, cplx z, double inner, double outer)
{
    const cplx seed = (z - c.a()[0]) / c.r();
    if (seed != cplx{})
        if (auto w = newton_invert(c, z, seed, inner, outer))
            return w;

    const double rc = c.critical_radius();
    std::vector<double> rings;
    if (rc > 0.0) {
        rings.push_back(0.5 * (1.0 + 1.0 / rc));
        rings.push_back(0.5 * (1.0 + rc));
    } else {
        rings.push_back(2.0);
        rings.push_back(0.5);
    }
    if (std::abs(seed) > 0.0)
        rings.push_back(std::abs(seed));
    for (double rho : rings) {
        if (!(rho > inner && rho < outer))
            rho = std::isfinite(outer) ? 0.5 * (inner + outer) : std::max(2.0 * inner, 1.0);
        for (int k = 0; k < 64; ++k) {
            const cplx s = rho * unit(kTwoPi * (k + 0.5) / 64.0);
            if (auto w = newton_invert(c, z, s, inner, outer))
                return w;
        }
    }
    return std::nullopt;
}

cplx schwarz(const PolynomialCurve& c, cplx z)
{
    const double rc = c.critical_radius();
    const double outer = rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
    auto w = invert(c, z, rc, outer);
    if (!w)
        throw ReflectionDomainError("schwarz: point lies outside the reflection annulus");
    return c.evaluate_conjugate(1.0 / *w);
}

cplx reflection(const PolynomialCurve& c, cplx z)
{
    return std::conj(schwarz(c, z));
}

InteriorMoments interior_moments(const PolynomialCurve& c, int kmax, double tol)
{
    if (kmax < 0)
        throw std::invalid_argument("interior_moments: kmax must be non-negative");
    const int n = c.degree();
    const LaurentSeries h = c.series();
    const LaurentSeries base = reflect_conjugate(h) * derivative(h);

    InteriorMoments out;
    out.v.resize(static_cast<std::size_t>(kmax + 1));
    out.contour.resize(static_cast<std::size_t>(kmax + 1));

    // Residue route: coefficient of z^{-k-1} in S(z) at infinity, pulled back by z = h(w).
    LaurentSeries integrand = base;
    for (int k = 0; k <= kmax; ++k) {
        out.v[static_cast<std::size_t>(k)] = residue(integrand);
        integrand = integrand * h;
    }

    // Green's theorem: v_k = (1/2 pi i) \oint conj(z) z^k dz, trapezoid in theta.
    // The integrand is a trigonometric polynomial, so enough nodes make it exact.
    std::size_t m = 64;
    while (m < 2 * static_cast<std::size_t>((n + 1) * (kmax + 2) + 4))
        m *= 2;
    std::vector<cplx> sums(static_cast<std::size_t>(kmax + 1));
    for (std::size_t i = 0; i < m; ++i) {
        const cplx w = unit(kTwoPi * static_cast<double>(i) / static_cast<double>(m));
        const cplx z = c.evaluate(w);
        cplx term = std::conj(z) * c.derivative(w) * w;
        for (int k = 0; k <= kmax; ++k) {
            sums[static_cast<std::size_t>(k)] += term;
            term *= z;
        }
    }
    double scale = 1.0;
    for (int k = 0; k <= kmax; ++k) {
        const cplx q = sums[static_cast<std::size_t>(k)] / static_cast<double>(m);
        out.contour[static_cast<std::size_t>(k)] = q;
        const double d = std::abs(q - out.v[static_cast<std::size_t>(k)]);
        scale = std::max(1.0, std::abs(q));
        out.max_discrepancy = std::max(out.max_discrepancy, d / scale);
    }
    out.agree = out.max_discrepancy <= tol;
    return out;
}

// ---------------------------------------------------------------------------
// Outline

const char* to_string(Containment c)
{
    switch (c) {
    case Containment::inside: return "inside";
    case Containment::outside: return "outside";
    case Containment::boundary: return "boundary";
    }
    return "?";
}

CurveOutline::CurveOutline(const PolynomialCurve& c, std::size_t samples) : curve_(c)
{
    if (samples < 8)
        throw std::invalid_argument("CurveOutline: need at least 8 samples");
    pts_.resize(samples);
    const double m = static_cast<double>(samples);
    bounds_ = {std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
               std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (std::size_t k = 0; k < samples; ++k) {
        pts_[k] = c.evaluate(unit(kTwoPi * static_cast<double>(k) / m));
        bounds_[0] = std::min(bounds_[0], pts_[k].real());
        bounds_[1] = std::max(bounds_[1], pts_[k].real());
        bounds_[2] = std::min(bounds_[2], pts_[k].imag());
        bounds_[3] = std::max(bounds_[3], pts_[k].imag());
    }
    // Bounding-box diagonal stands in for the diameter.
    diameter_ = std::hypot(bounds_[1] - bounds_[0], bounds_[3] - bounds_[2]);
    for (std::size_t k = 0; k < samples; ++k) {
        const cplx mid = c.evaluate(unit(kTwoPi * (static_cast<double>(k) + 0.5) / m));
        const cplx chord = 0.5 * (pts_[k] + pts_[(k + 1) % samples]);
        sagitta_ = std::max(sagitta_, std::abs(mid - chord));
    }
}

int CurveOutline::winding_number(cplx z) const
{
    // Signed crossings of the ray from z towards +x.
    int wn = 0;
    const std::size_t m = pts_.size();
    for (std::size_t k = 0; k < m; ++k) {
        const cplx a = pts_[k] - z;
        const cplx b = pts_[(k + 1) % m] - z;
        const double cross = a.real() * b.imag() - a.imag() * b.real();
        if (a.imag() <= 0.0) {
            if (b.imag() > 0.0 && cross > 0.0)
                ++wn;
        } else if (b.imag() <= 0.0 && cross < 0.0) {
            --wn;
        }
    }
    return wn;
}

Containment CurveOutline::classify(cplx z, double band_rel) const
{
    const double band = band_rel * diameter_;
    const std::size_t m = pts_.size();
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_k = 0;
    for (std::size_t k = 0; k < m; ++k) {
        const cplx a = pts_[k];
        const cplx d = pts_[(k + 1) % m] - a;
        const double len2 = std::norm(d);
        double s = len2 > 0.0 ? ((z - a) * std::conj(d)).real() / len2 : 0.0;
        s = std::clamp(s, 0.0, 1.0);
        const double dist = std::abs(z - (a + s * d));
        if (dist < best) {
            best = dist;
            best_k = k;
        }
    }
    if (best <= band)
        return Containment::boundary;

    // Near the polyline the chord error can exceed the distance: decide with
    // the exact parametrization instead.
    if (best <= 4.0 * sagitta_ + band) {
        const double theta = kTwoPi * static_cast<double>(best_k) / static_cast<double>(m);
        cplx w = unit(theta);
        bool ok = false;
        for (int it = 0; it < 60; ++it) {
            const cplx dw = (curve_.evaluate(w) - z) / curve_.derivative(w);
            w -= dw;
            if (std::abs(dw) < 1e-15) {
                ok = true;
                break;
            }
        }
        if (ok && std::abs(std::abs(w) - 1.0) < 0.25) {
            const double signed_dist = (std::abs(w) - 1.0) * std::abs(curve_.derivative(w));
            if (std::abs(signed_dist) <= band)
                return Containment::boundary;
            return signed_dist > 0.0 ? Containment::outside : Containment::inside;
        }
    }
    return winding_number(z) != 0 ? Containment::inside : Containment::outside;
}

namespace {

double orient(cplx a, cplx b, cplx c)
{
    return (b.real() - a.real()) * (c.imag() - a.imag()) - (b.imag() - a.imag()) * (c.real() - a.real());
}

bool on_segment(cplx a, cplx b, cplx p)
{
    return std::min(a.real(), b.real()) <= p.real() && p.real() <= std::max(a.real(), b.real()) &&
           std::min(a.imag(), b.imag()) <= p.imag() && p.imag() <= std::max(a.imag(), b.imag());
}

bool segments_intersect(cplx p1, cplx p2, cplx q1, cplx q2)
{
    const double d1 = orient(q1, q2, p1);
    const double d2 = orient(q1, q2, p2);
    const double d3 = orient(p1, p2, q1);
    const double d4 = orient(p1, p2, q2);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return true;
    if (d1 == 0 && on_segment(q1, q2, p1)) return true;
    if (d2 == 0 && on_segment(q1, q2, p2)) return true;
    if (d3 == 0 && on_segment(p1, p2, q1)) return true;
    if (d4 == 0 && on_segment(p1, p2, q2)) return true;
    return false;
}

} // namespace

bool CurveOutline::self_intersects() const
{
    // Sort-and-sweep over segment x-extents.
    const std::size_t m = pts_.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto xmin = [&](std::size_t k) { return std::min(pts_[k].real(), pts_[(k + 1) % m].real()); };
    auto xmax = [&](std::size_t k) { return std::max(pts_[k].real(), pts_[(k + 1) % m].real()); };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xmin(a) < xmin(b); });

    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t a = order[i];
        const double right = xmax(a);
        for (std::size_t j = i + 1; j < m && xmin(order[j]) <= right; ++j) {
            const std::size_t b = order[j];
            const std::size_t gap = a > b ? a - b : b - a;
            if (gap == 1 || gap == m - 1)
                continue;
            if (segments_intersect(pts_[a], pts_[(a + 1) % m], pts_[b], pts_[(b + 1) % m]))
                return true;
        }
    }
    return false;
}

int CurveOutline::tangent_winding() const
{
    const std::size_t m = pts_.size();
    double total = 0.0;
    cplx prev;
    for (std::size_t k = 0; k <= m; ++k) {
        const cplx w = unit(kTwoPi * static_cast<double>(k % m) / static_cast<double>(m));
        const cplx t = cplx{0.0, 1.0} * w * curve_.derivative(w);
        if (t == cplx{})
            return 0;
        if (k > 0)
            total += std::arg(t / prev);
        prev = t;
    }
    return static_cast<int>(std::lround(total / kTwoPi));
}

bool is_simple_positively_oriented(const PolynomialCurve& c, std::size_t samples)
{
    if (!(c.critical_radius() < 1.0))
        return false;
    CurveOutline outline(c, samples);
    return outline.tangent_winding() == 1 && !outline.self_intersects();
}

bool encloses_origin(const PolynomialCurve& c)
{
    return CurveOutline(c).winding_number(cplx{}) == 1;
}

Containment contains(const PolynomialCurve& c, cplx z, double band_rel)
{
    return CurveOutline(c).classify(z, band_rel);
}

} // namespace nmm
