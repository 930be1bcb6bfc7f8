#pragma once

// Statistics of sampled configurations against the equilibrium measure
// mu = (1 / (pi t0)) 1_{D+} d^2z.

#include "nmm/curve.hpp"
#include "nmm/gas_sampler.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace nmm {

/// Point-in-curve test against the sampled outline, with the edges binned by
/// horizontal strips. Same crossing rule as CurveOutline::winding_number.
class RegionIndex {
public:
    explicit RegionIndex(const PolynomialCurve& c, std::size_t samples = 4096, std::size_t strips = 512);

    int winding_number(cplx z) const;
    bool inside(cplx z) const { return winding_number(z) != 0; }
    std::array<double, 4> bounds() const { return bounds_; }

private:
    std::vector<cplx> pts_;
    std::vector<std::vector<std::uint32_t>> strips_;
    std::array<double, 4> bounds_{};
    double y0_ = 0.0, dy_ = 1.0;
};

struct DensityEstimate {
    std::array<double, 4> bounds{};
    int nx = 0, ny = 0;
    std::vector<std::uint64_t> counts;  ///< row-major, iy * nx + ix
    std::vector<double> density;        ///< counts / (binned * cell area)
    std::uint64_t binned = 0;
    std::uint64_t outside_grid = 0;

    double cell_area() const;
    cplx cell_center(int ix, int iy) const;
};

DensityEstimate histogram(const SampleSet& s, std::array<double, 4> bounds, int nx, int ny);

struct BulkDensity {
    double mean = 0.0;      ///< mean density over the selected bins
    double expected = 0.0;  ///< 1 / (pi t0)
    int bins = 0;
};

/// Bins lying wholly inside the curve (corners and centre) whose expected
/// count under mu is at least min_expected.
BulkDensity bulk_density(const DensityEstimate& d, const PolynomialCurve& c, double t0, double min_expected = 50.0);

/// Centroid of D+, v_1 / v_0.
cplx centroid(const PolynomialCurve& c);

/// Fraction of sampled points inside the curve dilated by `dilation` about its
/// centroid. dilation = +inf gives 1.
double support_fraction(const SampleSet& s, const PolynomialCurve& c, double dilation);

struct MomentEstimate {
    int k = 0;
    cplx mean;
    /// Standard error of the real and imaginary parts from the spread of
    /// per-chain means; absent with a single chain.
    std::optional<std::array<double, 2>> standard_error;
    std::vector<cplx> chain_means;
};

/// Estimates v_k with (t0 / N) sum_i z_i^k averaged over recorded frames.
/// k = 0 returns t0 exactly.
MomentEstimate moment_estimate(const SampleSet& s, int k);

struct TestFunction {
    std::string name;
    std::function<double(cplx)> f;
};

/// Re and Im of z^a conj(z)^b for 1 <= a + b <= 3, a >= b, and Gaussian bumps
/// of width 0.25 sqrt(t0) at the centroid and at four points around it.
std::vector<TestFunction> standard_test_functions(const PolynomialCurve& c, double t0);

/// int phi dmu by a fan quadrature from the centroid: Gauss-Legendre along
/// the rays, trapezoid rule in the angle.
double equilibrium_integral(const PolynomialCurve& c, double t0, const std::function<double(cplx)>& f,
                            int angular = 2048);

/// int z^a conj(z)^b dmu by Green's theorem on the boundary.
cplx equilibrium_monomial(const PolynomialCurve& c, double t0, int a, int b, int samples = 2048);

struct WeakConvergenceEntry {
    std::string name;
    double empirical = 0.0;
    double predicted = 0.0;
    std::optional<double> standard_error;
    std::optional<double> z_score;
};

std::vector<WeakConvergenceEntry> weak_convergence_test(const SampleSet& s, const PolynomialCurve& c,
                                                        const std::vector<TestFunction>& fs);

} // namespace nmm
