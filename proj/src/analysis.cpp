#include "nmm/analysis.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace nmm {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

cplx ipow(cplx z, int k)
{
    cplx r = 1.0;
    for (int i = 0; i < k; ++i)
        r *= z;
    return r;
}

// Mean of per-chain means of f over frames, and the standard error from the
// spread of the chain means.
template <class Fn>
void chain_average(const SampleSet& s, Fn&& frame_value, std::vector<cplx>& chain_means, cplx& mean,
                   std::optional<std::array<double, 2>>& se)
{
    chain_means.assign(static_cast<std::size_t>(s.chains), 0.0);
    for (int ch = 0; ch < s.chains; ++ch) {
        cplx m = 0.0;
        for (std::size_t f = 0; f < s.frames(); ++f)
            m += (frame_value(s.frame(ch, f)) - m) / static_cast<double>(f + 1);
        chain_means[static_cast<std::size_t>(ch)] = m;
    }
    mean = 0.0;
    for (std::size_t i = 0; i < chain_means.size(); ++i)
        mean += (chain_means[i] - mean) / static_cast<double>(i + 1);
    se.reset();
    if (s.chains >= 2) {
        double vr = 0.0, vi = 0.0;
        for (const auto& m : chain_means) {
            vr += (m.real() - mean.real()) * (m.real() - mean.real());
            vi += (m.imag() - mean.imag()) * (m.imag() - mean.imag());
        }
        const double c = static_cast<double>(s.chains);
        se = std::array<double, 2>{std::sqrt(vr / (c - 1) / c), std::sqrt(vi / (c - 1) / c)};
    }
}

void require_samples(const SampleSet& s)
{
    if (s.N < 1 || s.chains < 1 || s.frames() == 0)
        throw std::invalid_argument("analysis: empty sample set");
}

} // namespace

RegionIndex::RegionIndex(const PolynomialCurve& c, std::size_t samples, std::size_t strips)
{
    pts_.reserve(samples);
    bounds_ = {std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
               std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (std::size_t k = 0; k < samples; ++k) {
        const cplx z = c.evaluate(std::polar(1.0, kTwoPi * static_cast<double>(k) / static_cast<double>(samples)));
        pts_.push_back(z);
        bounds_[0] = std::min(bounds_[0], z.real());
        bounds_[1] = std::max(bounds_[1], z.real());
        bounds_[2] = std::min(bounds_[2], z.imag());
        bounds_[3] = std::max(bounds_[3], z.imag());
    }
    y0_ = bounds_[2];
    dy_ = std::max(bounds_[3] - bounds_[2], 1e-300) / static_cast<double>(strips);
    strips_.resize(strips);
    auto strip_of = [&](double y) {
        const double s = std::floor((y - y0_) / dy_);
        return static_cast<std::size_t>(std::clamp(s, 0.0, static_cast<double>(strips - 1)));
    };
    for (std::size_t k = 0; k < samples; ++k) {
        const cplx a = pts_[k], b = pts_[(k + 1) % samples];
        const std::size_t lo = strip_of(std::min(a.imag(), b.imag())), hi = strip_of(std::max(a.imag(), b.imag()));
        for (std::size_t s = lo; s <= hi; ++s)
            strips_[s].push_back(static_cast<std::uint32_t>(k));
    }
}

int RegionIndex::winding_number(cplx z) const
{
    if (!(z.imag() >= bounds_[2] && z.imag() <= bounds_[3] && z.real() >= bounds_[0] && z.real() <= bounds_[1]))
        return 0;
    const double sf = std::floor((z.imag() - y0_) / dy_);
    const auto s = static_cast<std::size_t>(std::clamp(sf, 0.0, static_cast<double>(strips_.size() - 1)));
    const std::size_t m = pts_.size();
    int wn = 0;
    for (const std::uint32_t k : strips_[s]) {
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

double DensityEstimate::cell_area() const
{
    return (bounds[1] - bounds[0]) / nx * (bounds[3] - bounds[2]) / ny;
}

cplx DensityEstimate::cell_center(int ix, int iy) const
{
    return {bounds[0] + (ix + 0.5) * (bounds[1] - bounds[0]) / nx, bounds[2] + (iy + 0.5) * (bounds[3] - bounds[2]) / ny};
}

DensityEstimate histogram(const SampleSet& s, std::array<double, 4> bounds, int nx, int ny)
{
    if (nx < 1 || ny < 1 || !(bounds[1] > bounds[0]) || !(bounds[3] > bounds[2]))
        throw std::invalid_argument("histogram: bad grid");
    DensityEstimate d;
    d.bounds = bounds;
    d.nx = nx;
    d.ny = ny;
    d.counts.assign(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny), 0);
    const double sx = nx / (bounds[1] - bounds[0]), sy = ny / (bounds[3] - bounds[2]);
    for (const cplx& z : s.positions) {
        const double fx = std::floor((z.real() - bounds[0]) * sx), fy = std::floor((z.imag() - bounds[2]) * sy);
        if (!(fx >= 0 && fx < nx && fy >= 0 && fy < ny)) {
            ++d.outside_grid;
            continue;
        }
        ++d.counts[static_cast<std::size_t>(fy) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(fx)];
        ++d.binned;
    }
    d.density.resize(d.counts.size());
    const double norm = d.binned ? 1.0 / (static_cast<double>(d.binned) * d.cell_area()) : 0.0;
    for (std::size_t i = 0; i < d.counts.size(); ++i)
        d.density[i] = static_cast<double>(d.counts[i]) * norm;
    return d;
}

BulkDensity bulk_density(const DensityEstimate& d, const PolynomialCurve& c, double t0, double min_expected)
{
    const RegionIndex region(c);
    BulkDensity out;
    out.expected = 1.0 / (M_PI * t0);
    const double expected_count = static_cast<double>(d.binned) * d.cell_area() * out.expected;
    if (expected_count < min_expected)
        return out;
    const double hx = 0.5 * (d.bounds[1] - d.bounds[0]) / d.nx, hy = 0.5 * (d.bounds[3] - d.bounds[2]) / d.ny;
    double sum = 0.0;
    for (int iy = 0; iy < d.ny; ++iy) {
        for (int ix = 0; ix < d.nx; ++ix) {
            const cplx m = d.cell_center(ix, iy);
            if (!region.inside(m) || !region.inside(m + cplx(hx, hy)) || !region.inside(m + cplx(-hx, hy)) ||
                !region.inside(m + cplx(hx, -hy)) || !region.inside(m + cplx(-hx, -hy)))
                continue;
            sum += d.density[static_cast<std::size_t>(iy) * static_cast<std::size_t>(d.nx) + static_cast<std::size_t>(ix)];
            ++out.bins;
        }
    }
    if (out.bins > 0)
        out.mean = sum / out.bins;
    return out;
}

cplx centroid(const PolynomialCurve& c)
{
    const auto m = interior_moments(c, 1);
    return m.v[1] / m.v[0];
}

double support_fraction(const SampleSet& s, const PolynomialCurve& c, double dilation)
{
    require_samples(s);
    if (!(dilation > 0.0))
        throw std::invalid_argument("support_fraction: dilation must be positive");
    if (std::isinf(dilation))
        return 1.0;
    const RegionIndex region(c);
    const cplx o = centroid(c);
    std::uint64_t hits = 0;
    for (const cplx& z : s.positions)
        if (region.inside(o + (z - o) / dilation))
            ++hits;
    return static_cast<double>(hits) / static_cast<double>(s.positions.size());
}

MomentEstimate moment_estimate(const SampleSet& s, int k)
{
    require_samples(s);
    if (k < 0)
        throw std::invalid_argument("moment_estimate: k must be >= 0");
    MomentEstimate e;
    e.k = k;
    const double n = static_cast<double>(s.N);
    chain_average(
        s,
        [&](const cplx* z) {
            cplx sum = 0.0;
            for (int i = 0; i < s.N; ++i)
                sum += ipow(z[i], k);
            return s.t0 * (sum / n);
        },
        e.chain_means, e.mean, e.standard_error);
    return e;
}

std::vector<TestFunction> standard_test_functions(const PolynomialCurve& c, double t0)
{
    std::vector<TestFunction> fs;
    for (int deg = 1; deg <= 3; ++deg) {
        for (int b = 0; 2 * b <= deg; ++b) {
            const int a = deg - b;
            const std::string mono = "z^" + std::to_string(a) + " zbar^" + std::to_string(b);
            fs.push_back({"re[" + mono + "]", [a, b](cplx z) { return (ipow(z, a) * ipow(std::conj(z), b)).real(); }});
            if (a != b)
                fs.push_back({"im[" + mono + "]", [a, b](cplx z) { return (ipow(z, a) * ipow(std::conj(z), b)).imag(); }});
        }
    }
    const cplx o = centroid(c);
    double reach = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 1024; ++k)
        reach = std::min(reach, std::abs(c.evaluate(std::polar(1.0, kTwoPi * k / 1024.0)) - o));
    const double width = 0.25 * std::sqrt(t0);
    std::vector<cplx> centres{o};
    for (int q = 0; q < 4; ++q)
        centres.push_back(o + std::polar(0.5 * reach, q * M_PI / 2));
    for (std::size_t i = 0; i < centres.size(); ++i) {
        const cplx ctr = centres[i];
        fs.push_back({"bump" + std::to_string(i),
                      [ctr, width](cplx z) { return std::exp(-std::norm(z - ctr) / (2 * width * width)); }});
    }
    return fs;
}

double equilibrium_integral(const PolynomialCurve& c, double t0, const std::function<double(cplx)>& f, int angular)
{
    using boost::math::quadrature::gauss;
    const cplx o = centroid(c);
    double total = 0.0;
    for (int k = 0; k < angular; ++k) {
        const cplx w = std::polar(1.0, kTwoPi * k / angular);
        const cplx g = c.evaluate(w) - o;
        const cplx dg = cplx(0.0, 1.0) * w * c.derivative(w);
        const double jac = (std::conj(g) * dg).imag();
        const double radial = gauss<double, 30>::integrate([&](double s) { return f(o + s * g) * s; }, 0.0, 1.0);
        total += radial * jac;
    }
    return total * (kTwoPi / angular) / (M_PI * t0);
}

cplx equilibrium_monomial(const PolynomialCurve& c, double t0, int a, int b, int samples)
{
    cplx total = 0.0;
    for (int k = 0; k < samples; ++k) {
        const cplx w = std::polar(1.0, kTwoPi * k / samples);
        const cplx z = c.evaluate(w);
        const cplx dz = cplx(0.0, 1.0) * w * c.derivative(w);
        total += ipow(z, a) * ipow(std::conj(z), b + 1) * dz;
    }
    total *= kTwoPi / samples;
    return total / (cplx(0.0, 2.0 * (b + 1))) / (M_PI * t0);
}

std::vector<WeakConvergenceEntry> weak_convergence_test(const SampleSet& s, const PolynomialCurve& c,
                                                        const std::vector<TestFunction>& fs)
{
    require_samples(s);
    std::vector<WeakConvergenceEntry> out;
    for (const auto& tf : fs) {
        WeakConvergenceEntry e;
        e.name = tf.name;
        e.predicted = equilibrium_integral(c, s.t0, tf.f);
        std::vector<cplx> means;
        cplx mean;
        std::optional<std::array<double, 2>> se;
        chain_average(
            s,
            [&](const cplx* z) {
                double sum = 0.0;
                for (int i = 0; i < s.N; ++i)
                    sum += tf.f(z[i]);
                return cplx(sum / s.N, 0.0);
            },
            means, mean, se);
        e.empirical = mean.real();
        if (se) {
            e.standard_error = (*se)[0];
            if ((*se)[0] > 0.0)
                e.z_score = (e.empirical - e.predicted) / (*se)[0];
        }
        out.push_back(e);
    }
    return out;
}

} // namespace nmm
