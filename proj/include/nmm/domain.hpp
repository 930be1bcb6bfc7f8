#pragma once

// The compact domain D that confines the eigenvalues: a closed disk or a
// simple polygon.

#include "nmm/curve.hpp"

#include <array>
#include <vector>

namespace nmm {

struct DomainSpec {
    enum class Kind { disk, polygon };

    Kind kind = Kind::disk;
    cplx center{};
    double radius = 1.0;
    std::vector<cplx> vertices; ///< polygon only, either orientation

    static DomainSpec disk(cplx center, double radius);
    static DomainSpec polygon(std::vector<cplx> vertices);

    /// Throws std::invalid_argument for a non-positive radius or fewer than 3 vertices.
    void validate() const;
    /// Closed set membership.
    bool contains(cplx z) const;
    /// (xmin, xmax, ymin, ymax)
    std::array<double, 4> bounds() const;
};

/// Disk around the minimizer of U(z) = t0 V(z) with the largest radius on which
/// U exceeds its minimum away from the center, shrunk by `safety`, and capped
/// at cap_factor * sqrt(t0).
DomainSpec default_domain(const MomentVector& t, cplx minimizer, double safety = 0.95,
                          double cap_factor = 5.0);

/// True if every sampled point of the curve lies in the interior of D.
bool domain_contains_curve(const DomainSpec& d, const CurveOutline& outline);

} // namespace nmm
