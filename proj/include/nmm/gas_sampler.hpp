#pragma once

// Metropolis sampler for N points in D with density
//   exp(-N sum V(z_i)) prod_{i<j} |z_i - z_j|^2.

#include "nmm/curve.hpp"
#include "nmm/domain.hpp"
#include "nmm/energy.hpp"

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace nmm {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// One stream per (seed, chain, purpose): the key is the seed, the counter holds
/// the draw index in its low 64 bits and chain and purpose in its high 64 bits,
/// so streams of different chains never overlap.
class ChainRng {
public:
    enum class Purpose : std::uint32_t { sweep = 0, init = 1 };

    ChainRng(std::uint64_t seed, std::uint64_t chain, Purpose purpose = Purpose::sweep);

    std::array<std::uint32_t, 4> next();
    std::uint64_t position() const { return draw_; }

    /// (x + 1/2) 2^-32, in (0, 1).
    static double unit(std::uint32_t x) { return (static_cast<double>(x) + 0.5) * 0x1p-32; }

private:
    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t draw_ = 0;
};

/// Raised when the cached energy drifts from a full recomputation.
class ToleranceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SamplerConfig {
    int N = 1;
    long sweeps = 1000;
    long burn_in = 100;
    /// 0 selects 0.5 sqrt(t0 / N).
    double proposal_sigma = 0.0;
    std::uint64_t seed = 0;
    int thinning = 1;
    int chains = 1;
    /// Sweeps between full recomputations of the cached energy.
    int resync_interval = 100;

    void validate() const;
    double sigma(double t0) const;
};

struct GasState {
    std::vector<cplx> z;
    double energy = 0.0;  ///< cached H
    long sweep_index = 0;
};

struct ChainStats {
    std::uint64_t proposals = 0;
    std::uint64_t accepted = 0;
    std::uint64_t rejected_outside = 0;
    std::uint64_t rejected_coincident = 0;
    double max_resync_error = 0.0;  ///< relative drift of the cached energy

    double acceptance_rate() const { return proposals ? static_cast<double>(accepted) / static_cast<double>(proposals) : 0.0; }
};

/// N points uniform on the interior of the curve intersected with D (rejection
/// from the curve's bounding box), drawn from the chain's init stream.
GasState init_state(const SamplerConfig& cfg, const PolynomialCurve& c, const DomainSpec& domain,
                    const Potential& p, std::uint64_t chain);

/// N single-site Metropolis updates in particle order. One generator block per
/// proposal: two words for the Gaussian step, one for the acceptance test.
void sweep(GasState& s, const Potential& p, const DomainSpec& domain, ChainRng& rng, double sigma,
           ChainStats& stats);

struct SampleSet {
    int N = 0;
    int chains = 0;
    double t0 = 0.0;
    SamplerConfig config;
    /// Recorded sweep indices, identical for every chain.
    std::vector<long> sweeps;
    /// positions[((chain * frames) + frame) * N + particle]
    std::vector<cplx> positions;
    std::vector<ChainStats> stats;

    std::size_t frames() const { return sweeps.size(); }
    const cplx* frame(int chain, std::size_t f) const
    {
        return positions.data() + (static_cast<std::size_t>(chain) * frames() + f) * static_cast<std::size_t>(N);
    }
    std::size_t total_points() const { return positions.size(); }
};

/// Runs cfg.chains chains on up to `threads` workers. The result depends only
/// on (cfg, p, c, domain).
SampleSet run(const SamplerConfig& cfg, const Potential& p, const PolynomialCurve& c, const DomainSpec& domain,
              unsigned threads = 1);

} // namespace nmm
