#include "nmm/domain.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace nmm {

DomainSpec DomainSpec::disk(cplx center, double radius)
{
    DomainSpec d;
    d.kind = Kind::disk;
    d.center = center;
    d.radius = radius;
    d.validate();
    return d;
}

DomainSpec DomainSpec::polygon(std::vector<cplx> vertices)
{
    DomainSpec d;
    d.kind = Kind::polygon;
    d.vertices = std::move(vertices);
    d.validate();
    return d;
}

void DomainSpec::validate() const
{
    if (kind == Kind::disk) {
        if (!(radius > 0.0) || !std::isfinite(radius))
            throw std::invalid_argument("domain: disk radius must be finite and positive");
        if (!std::isfinite(center.real()) || !std::isfinite(center.imag()))
            throw std::invalid_argument("domain: non-finite center");
    } else {
        if (vertices.size() < 3)
            throw std::invalid_argument("domain: polygon needs at least 3 vertices");
        for (const auto& v : vertices)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw std::invalid_argument("domain: non-finite polygon vertex");
    }
}

bool DomainSpec::contains(cplx z) const
{
    if (kind == Kind::disk)
        return std::abs(z - center) <= radius;

    // Even-odd rule; points on an edge count as inside.
    bool inside = false;
    const std::size_t n = vertices.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const cplx a = vertices[j], b = vertices[i];
        const double cross = (b.real() - a.real()) * (z.imag() - a.imag()) -
                             (b.imag() - a.imag()) * (z.real() - a.real());
        if (cross == 0.0 && std::min(a.real(), b.real()) <= z.real() && z.real() <= std::max(a.real(), b.real()) &&
            std::min(a.imag(), b.imag()) <= z.imag() && z.imag() <= std::max(a.imag(), b.imag()))
            return true;
        if ((a.imag() > z.imag()) != (b.imag() > z.imag())) {
            const double x = a.real() + (z.imag() - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag());
            if (z.real() < x)
                inside = !inside;
        }
    }
    return inside;
}

std::array<double, 4> DomainSpec::bounds() const
{
    if (kind == Kind::disk)
        return {center.real() - radius, center.real() + radius, center.imag() - radius, center.imag() + radius};
    std::array<double, 4> b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
                            std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& v : vertices) {
        b[0] = std::min(b[0], v.real());
        b[1] = std::max(b[1], v.real());
        b[2] = std::min(b[2], v.imag());
        b[3] = std::max(b[3], v.imag());
    }
    return b;
}

namespace {

double scaled_potential(const MomentVector& t, cplx z)
{
    cplx acc{};
    for (int k = static_cast<int>(t.t.size()); k >= 1; --k)
        acc = (acc + t(k)) * z;
    return std::norm(z) - 2.0 * acc.real();
}

} // namespace

DomainSpec default_domain(const MomentVector& t, cplx minimizer, double safety, double cap_factor)
{
    if (!(t.t0 > 0.0))
        throw std::invalid_argument("default_domain: t0 must be positive");
    const double cap = cap_factor * std::sqrt(t.t0);
    const double u0 = scaled_potential(t, minimizer);

    // March outwards on circles until U - U(z*) stops being positive somewhere;
    // radii past cap / safety cannot change the result.
    const int angles = 720;
    const int radii = 2000;
    const double reach = cap / safety;
    double radius = cap;
    for (int i = 1; i <= radii; ++i) {
        const double rho = reach * i / radii;
        bool positive = true;
        for (int k = 0; k < angles && positive; ++k) {
            const cplx z = minimizer + std::polar(rho, 2.0 * M_PI * k / angles);
            if (!(scaled_potential(t, z) - u0 > 0.0))
                positive = false;
        }
        if (!positive) {
            radius = std::min(cap, safety * reach * (i - 1) / radii);
            break;
        }
    }
    if (!(radius > 0.0))
        throw std::invalid_argument("default_domain: potential is not positive around its minimizer");
    return DomainSpec::disk(minimizer, radius);
}

bool domain_contains_curve(const DomainSpec& d, const CurveOutline& outline)
{
    for (const auto& p : outline.points())
        if (!d.contains(p))
            return false;
    return true;
}

} // namespace nmm
