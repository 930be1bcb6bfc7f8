#include "nmm/energy.hpp"
#include "nmm/parallel.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <stdexcept>

namespace nmm {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

} // namespace

Potential::Potential(double t0, std::vector<cplx> t) : t0_(t0), t_(std::move(t))
{
    if (!(t0_ > 0.0) || !std::isfinite(t0_))
        throw std::invalid_argument("potential: t0 must be finite and positive");
}

double Potential::scaled(cplx z) const
{
    cplx acc{};
    for (auto it = t_.rbegin(); it != t_.rend(); ++it)
        acc = (acc + *it) * z;
    return std::norm(z) - 2.0 * acc.real();
}

double potential_value(const Potential& p, cplx z)
{
    return p.value(z);
}

// ---------------------------------------------------------------------------

EnergyField::EnergyField(Potential p, PolynomialCurve c, QuadratureOptions opt)
    : p_(std::move(p)), c_(std::move(c)), opt_(opt)
{
    if (opt_.panels < 1)
        throw std::invalid_argument("quadrature: panels must be >= 1");
    l0_ = log_potential(0.0);

    const LaurentSeries h = c_.series();
    const LaurentSeries base = reflect_conjugate(h) * derivative(h);
    std::vector<cplx> anti;
    const int lo = std::min(base.lo() + 1, 0);
    const int hi = std::max(base.hi() + 1, 0);
    for (int e = lo; e <= hi; ++e) {
        // w^e comes from the w^(e-1) term; the 1/w term becomes log w.
        const int src = e - 1;
        anti.push_back(e == 0 ? cplx{} : base[src] / static_cast<double>(e));
    }
    antiderivative_ = LaurentSeries::exact(lo, anti);
    // The 1/w coefficient is t0, real for any curve.
    log_coefficient_ = base[-1].real();
    h1_norm_ = std::norm(c_.evaluate(1.0));
    f1_ = antiderivative_.evaluate(1.0);
}

QuadratureValue EnergyField::log_potential(cplx z) const
{
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    auto f = [&](double theta) {
        const cplx w = std::polar(1.0, theta);
        const cplx g = c_.evaluate(w);
        const cplx dg = cplx(0.0, 1.0) * w * c_.derivative(w);
        const cplx d = g - z;
        const double jac = (std::conj(d) * dg).imag();
        const double m = std::abs(d);
        if (m == 0.0)
            return 0.0;
        return (0.5 * std::log(m) - 0.25) * jac;
    };
    QuadratureValue out;
    const double width = kTwoPi / opt_.panels;
    for (int k = 0; k < opt_.panels; ++k) {
        double err = 0.0;
        out.value += GK::integrate(f, k * width, (k + 1) * width, static_cast<unsigned>(opt_.max_depth),
                                   opt_.panel_tol, &err);
        out.error += err;
    }
    return out;
}

QuadratureValue EnergyField::quadrature(cplx z) const
{
    const QuadratureValue lz = log_potential(z);
    const double scale = 2.0 / (M_PI * p_.t0());
    return {p_.value(z) - scale * (lz.value - l0_.value), scale * (lz.error + l0_.error)};
}

double EnergyField::exterior_closed_form(cplx w) const
{
    if (!(std::abs(w) >= 1.0))
        throw std::domain_error("exterior_closed_form: requires |w| >= 1");
    const double integral = (antiderivative_.evaluate(w) - f1_).real() + log_coefficient_ * std::log(std::abs(w));
    return (std::norm(c_.evaluate(w)) - h1_norm_ - 2.0 * integral) / p_.t0();
}

double EnergyField::exterior_closed_form_at(cplx z) const
{
    auto w = invert(c_, z, 1.0, std::numeric_limits<double>::infinity());
    if (!w)
        throw ReflectionDomainError("exterior_closed_form: point is not in the exterior of the curve");
    return exterior_closed_form(*w);
}

double energy_quadrature(const Potential& p, const PolynomialCurve& c, cplx z, const QuadratureOptions& opt)
{
    const EnergyField field(p, c, opt);
    const auto q = field.quadrature(z);
    if (!(q.error <= opt.tol))
        throw std::runtime_error("energy_quadrature: error estimate " + std::to_string(q.error) +
                                 " exceeds tolerance");
    return q.value;
}

double energy_exterior_closed_form(const Potential& p, const PolynomialCurve& c, cplx w)
{
    return EnergyField(p, c).exterior_closed_form(w);
}

GradientCheck gradient_check(const EnergyField& field, cplx z)
{
    const double t0 = field.potential().t0();
    const double h = 1e-5 * std::sqrt(t0);
    auto e = [&](cplx q) { return field.exterior_closed_form_at(q); };
    auto central = [&](cplx dir, double step) { return (e(z + step * dir) - e(z - step * dir)) / (2.0 * step); };
    auto richardson = [&](cplx dir) { return (4.0 * central(dir, 0.5 * h) - central(dir, h)) / 3.0; };

    GradientCheck out;
    const double ex = richardson(1.0);
    const double ey = richardson(cplx(0.0, 1.0));
    out.lhs = 0.5 * cplx(ex, ey);
    out.rhs = (z - reflection(field.curve(), z)) / t0;
    out.relative_error = std::abs(out.lhs - out.rhs) / std::abs(out.rhs);
    return out;
}

GradientCheck gradient_check(const Potential& p, const PolynomialCurve& c, cplx z)
{
    return gradient_check(EnergyField(p, c), z);
}

// ---------------------------------------------------------------------------

const char* to_string(NodeClass c)
{
    switch (c) {
    case NodeClass::inside: return "inside";
    case NodeClass::outside: return "outside";
    case NodeClass::boundary: return "boundary";
    case NodeClass::excluded: return "excluded";
    }
    return "?";
}

cplx FieldGrid::node(int ix, int iy) const
{
    const double x = nx > 1 ? bounds[0] + (bounds[1] - bounds[0]) * ix / (nx - 1) : 0.5 * (bounds[0] + bounds[1]);
    const double y = ny > 1 ? bounds[2] + (bounds[3] - bounds[2]) * iy / (ny - 1) : 0.5 * (bounds[2] + bounds[3]);
    return {x, y};
}

FieldGrid field_grid(const EnergyField& field, const DomainSpec& domain, const VerifyOptions& opt)
{
    if (opt.nx < 1 || opt.ny < 1)
        throw std::invalid_argument("field_grid: resolution must be positive");
    FieldGrid g;
    g.bounds = domain.bounds();
    g.nx = opt.nx;
    g.ny = opt.ny;
    const std::size_t n = static_cast<std::size_t>(opt.nx) * static_cast<std::size_t>(opt.ny);
    g.values.assign(n, std::numeric_limits<double>::quiet_NaN());
    g.errors.assign(n, 0.0);
    g.classes.assign(n, NodeClass::excluded);

    const CurveOutline outline(field.curve());
    parallel_for(n, opt.threads, [&](std::size_t i) {
        const int ix = static_cast<int>(i % static_cast<std::size_t>(opt.nx));
        const int iy = static_cast<int>(i / static_cast<std::size_t>(opt.nx));
        const cplx z = g.node(ix, iy);
        if (!domain.contains(z))
            return;
        switch (outline.classify(z, opt.band_rel)) {
        case Containment::inside: g.classes[i] = NodeClass::inside; break;
        case Containment::outside: g.classes[i] = NodeClass::outside; break;
        case Containment::boundary: g.classes[i] = NodeClass::boundary; break;
        }
        const auto q = field.quadrature(z);
        g.values[i] = q.value;
        g.errors[i] = q.error;
    });
    return g;
}

VerifyReport verify_field(const FieldGrid& grid, const EnergyField& field, const DomainSpec& domain,
                          const VerifyOptions& opt, cplx minimizer)
{
    VerifyReport r;
    double sum = 0.0;
    const auto b = grid.bounds;
    const double diam = std::hypot(b[1] - b[0], b[3] - b[2]);
    for (int iy = 0; iy < grid.ny; ++iy) {
        for (int ix = 0; ix < grid.nx; ++ix) {
            const std::size_t i = static_cast<std::size_t>(iy) * static_cast<std::size_t>(grid.nx) + static_cast<std::size_t>(ix);
            const NodeClass k = grid.classes[i];
            if (k == NodeClass::excluded) {
                ++r.excluded_nodes;
                continue;
            }
            const cplx z = grid.node(ix, iy);
            const double v = grid.values[i];
            r.max_quadrature_error = std::max(r.max_quadrature_error, grid.errors[i]);
            const double dz = std::abs(z - minimizer);
            if (dz > 1e-3 * diam)
                r.min_potential_ratio = std::min(
                    r.min_potential_ratio, (field.potential().scaled(z) - field.potential().scaled(minimizer)) / (dz * dz));
            if (k == NodeClass::inside) {
                ++r.interior_nodes;
                r.max_interior_abs = std::max(r.max_interior_abs, std::abs(v));
                sum += v;
            } else if (k == NodeClass::outside) {
                ++r.exterior_nodes;
                r.min_exterior = std::min(r.min_exterior, v);
            } else {
                ++r.boundary_nodes;
            }
        }
    }
    r.interior_mean = r.interior_nodes > 0 ? sum / r.interior_nodes : 0.0;
    r.curve_inside_domain = domain_contains_curve(domain, CurveOutline(field.curve()));
    r.interior_pass = r.max_interior_abs <= opt.interior_tol;
    r.exterior_pass = r.exterior_nodes == 0 || r.min_exterior >= -opt.exterior_tol;
    r.pass = r.interior_pass && r.exterior_pass && r.curve_inside_domain;
    return r;
}

VariationalResult variational_verify(const Potential& p, const PolynomialCurve& c, const DomainSpec& domain,
                                     const VerifyOptions& opt)
{
    const EnergyField field(p, c, opt.quadrature);
    VariationalResult out;
    out.grid = field_grid(field, domain, opt);
    out.report = verify_field(out.grid, field, domain, opt);
    return out;
}

// ---------------------------------------------------------------------------

DiscreteEnergy discrete_energy(const Potential& p, const std::vector<cplx>& z)
{
    DiscreteEnergy out;
    const double n = static_cast<double>(z.size());
    if (z.empty())
        return out;
    double v = 0.0, logs = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        v += p.value(z[i]);
        for (std::size_t j = i + 1; j < z.size(); ++j) {
            const double d = std::abs(z[i] - z[j]);
            if (d == 0.0) {
                out.H = out.I = std::numeric_limits<double>::infinity();
                return out;
            }
            logs += std::log(d);
        }
    }
    out.H = n * v - 2.0 * logs;
    out.I = out.H / (n * n);
    return out;
}

EquilibriumEnergy equilibrium_energy(const EnergyField& field, int angular)
{
    // Integrals over D+ by the sweep z = s h(e^{i theta}), 0 <= s <= 1, with
    // Jacobian s Im(conj(g) g'); the origin lies inside D+. 16-point
    // Gauss-Legendre in s, trapezoid in theta.
    using GL = boost::math::quadrature::gauss<double, 16>;
    const auto& c = field.curve();
    const auto& p = field.potential();
    const double mass = M_PI * p.t0();

    auto sweep = [&](int m, double offset, auto&& f) {
        double total = 0.0;
        for (int k = 0; k < m; ++k) {
            const cplx w = std::polar(1.0, kTwoPi * (k + offset) / m);
            const cplx g = c.evaluate(w);
            const double jac = (std::conj(g) * cplx(0.0, 1.0) * w * c.derivative(w)).imag();
            total += jac * GL::integrate([&](double s) { return s * f(s * g); }, 0.0, 1.0);
        }
        return total * kTwoPi / m;
    };

    // V is a polynomial along each ray, so the potential term is exact up to rounding.
    const double v_int = sweep(4096, 0.0, [&](cplx z) { return p.value(z); });
    const double l_int = sweep(angular, 0.5, [&](cplx z) { return field.log_potential(z).value; });

    EquilibriumEnergy out;
    out.potential_term = v_int / mass;
    out.value = out.potential_term - l_int / (mass * mass);
    out.identity = 0.5 * out.potential_term - field.log_potential(0.0).value / mass;
    return out;
}

double smeared_log_energy(const Potential& p, const std::vector<cplx>& centers, const std::vector<double>& weights,
                          double eps)
{
    if (centers.size() != weights.size())
        throw std::invalid_argument("smeared_log_energy: size mismatch");
    if (!(eps > 0.0))
        throw std::invalid_argument("smeared_log_energy: eps must be positive");
    // Uniform disk of radius eps: mean of |z|^2 is |c|^2 + eps^2 / 2, harmonic
    // terms average to their central value; self energy -log eps + 1/4; two
    // disjoint disks interact like point charges.
    double e = 0.0;
    for (std::size_t i = 0; i < centers.size(); ++i) {
        const double wi = weights[i];
        e += wi * (p.value(centers[i]) + 0.5 * eps * eps / p.t0());
        e += wi * wi * (-std::log(eps) + 0.25);
        for (std::size_t j = i + 1; j < centers.size(); ++j) {
            const double d = std::abs(centers[i] - centers[j]);
            if (d < 2.0 * eps)
                throw std::invalid_argument("smeared_log_energy: disks overlap");
            e -= 2.0 * wi * weights[j] * std::log(d);
        }
    }
    return e;
}

double gaussian_positivity_lemma(double alpha, double x)
{
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("gaussian_positivity_lemma: alpha must lie in [0, 1]");
    if (!(x >= 1.0) || !std::isfinite(x))
        throw std::invalid_argument("gaussian_positivity_lemma: x must be >= 1");
    const double u = x - 1.0;
    return u * (1.0 + alpha / x) - (1.0 + alpha) * std::log1p(u);
}

} // namespace nmm
