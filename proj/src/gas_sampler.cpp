#include "nmm/gas_sampler.hpp"
#include "nmm/parallel.hpp"

#include <cmath>
#include <string>

namespace nmm {

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key)
{
    constexpr std::uint32_t m0 = 0xD2511F53u, m1 = 0xCD9E8D57u;
    constexpr std::uint32_t w0 = 0x9E3779B9u, w1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(m0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(m1) * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += w0;
        key[1] += w1;
    }
    return ctr;
}

ChainRng::ChainRng(std::uint64_t seed, std::uint64_t chain, Purpose purpose)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      stream_((chain & ((std::uint64_t{1} << 62) - 1)) | (static_cast<std::uint64_t>(purpose) << 62))
{
    if (chain >= (std::uint64_t{1} << 62))
        throw std::invalid_argument("ChainRng: chain index too large");
}

std::array<std::uint32_t, 4> ChainRng::next()
{
    const std::array<std::uint32_t, 4> ctr{static_cast<std::uint32_t>(draw_), static_cast<std::uint32_t>(draw_ >> 32),
                                           static_cast<std::uint32_t>(stream_),
                                           static_cast<std::uint32_t>(stream_ >> 32)};
    ++draw_;
    return philox4x32(ctr, key_);
}

void SamplerConfig::validate() const
{
    if (N < 1)
        throw std::invalid_argument("sampler: N must be >= 1");
    if (burn_in < 0)
        throw std::invalid_argument("sampler: burn_in must be >= 0");
    if (!(sweeps > burn_in))
        throw std::invalid_argument("sampler: sweeps must exceed burn_in");
    if (!(proposal_sigma >= 0.0) || !std::isfinite(proposal_sigma))
        throw std::invalid_argument("sampler: proposal_sigma must be positive (or 0 for the default)");
    if (thinning < 1)
        throw std::invalid_argument("sampler: thinning must be >= 1");
    if (chains < 1)
        throw std::invalid_argument("sampler: chains must be >= 1");
    if (resync_interval < 1)
        throw std::invalid_argument("sampler: resync_interval must be >= 1");
}

double SamplerConfig::sigma(double t0) const
{
    return proposal_sigma > 0.0 ? proposal_sigma : 0.5 * std::sqrt(t0 / N);
}

GasState init_state(const SamplerConfig& cfg, const PolynomialCurve& c, const DomainSpec& domain,
                    const Potential& p, std::uint64_t chain)
{
    cfg.validate();
    const CurveOutline outline(c);
    const auto b = outline.bounds();
    ChainRng rng(cfg.seed, chain, ChainRng::Purpose::init);
    GasState s;
    s.z.reserve(static_cast<std::size_t>(cfg.N));
    std::uint64_t attempts = 0;
    while (s.z.size() < static_cast<std::size_t>(cfg.N)) {
        if (++attempts > 1000000ull * static_cast<std::uint64_t>(cfg.N))
            throw std::runtime_error("init_state: interior of the curve does not meet the domain");
        const auto r = rng.next();
        const cplx z(b[0] + (b[1] - b[0]) * ChainRng::unit(r[0]), b[2] + (b[3] - b[2]) * ChainRng::unit(r[1]));
        if (!domain.contains(z) || outline.classify(z) != Containment::inside)
            continue;
        bool clash = false;
        for (const auto& q : s.z)
            if (std::abs(q - z) < 1e-14)
                clash = true;
        if (!clash)
            s.z.push_back(z);
    }
    s.energy = discrete_energy(p, s.z).H;
    return s;
}

void sweep(GasState& s, const Potential& p, const DomainSpec& domain, ChainRng& rng, double sigma, ChainStats& stats)
{
    const std::size_t n = s.z.size();
    const double big_n = static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = rng.next();
        ++stats.proposals;
        // Box-Muller pair.
        const double rad = std::sqrt(-2.0 * std::log(ChainRng::unit(r[0])));
        const double ang = 2.0 * M_PI * ChainRng::unit(r[1]);
        const cplx old = s.z[i];
        const cplx prop = old + sigma * cplx(rad * std::cos(ang), rad * std::sin(ang));
        if (!domain.contains(prop)) {
            ++stats.rejected_outside;
            continue;
        }

        // Sum of log(|z' - z_j|^2 / |z - z_j|^2), four ratios per logarithm.
        double log_ratio = 0.0;
        double prod = 1.0;
        int pending = 0;
        bool coincident = false;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i)
                continue;
            const double dn = std::norm(prop - s.z[j]);
            if (dn < 1e-28) {
                coincident = true;
                break;
            }
            prod *= dn / std::norm(old - s.z[j]);
            if (++pending == 4) {
                log_ratio += std::log(prod);
                prod = 1.0;
                pending = 0;
            }
        }
        if (coincident) {
            ++stats.rejected_coincident;
            continue;
        }
        log_ratio += std::log(prod);

        const double dh = big_n * (p.value(prop) - p.value(old)) - log_ratio;
        if (dh <= 0.0 || ChainRng::unit(r[2]) < std::exp(-dh)) {
            s.z[i] = prop;
            s.energy += dh;
            ++stats.accepted;
        }
    }
    ++s.sweep_index;
}

SampleSet run(const SamplerConfig& cfg, const Potential& p, const PolynomialCurve& c, const DomainSpec& domain,
              unsigned threads)
{
    cfg.validate();
    domain.validate();
    SampleSet out;
    out.N = cfg.N;
    out.chains = cfg.chains;
    out.t0 = p.t0();
    out.config = cfg;
    for (long s = cfg.burn_in + 1; s <= cfg.sweeps; ++s)
        if ((s - cfg.burn_in) % cfg.thinning == 0)
            out.sweeps.push_back(s);
    const std::size_t frames = out.sweeps.size();
    const std::size_t n = static_cast<std::size_t>(cfg.N);
    out.positions.resize(static_cast<std::size_t>(cfg.chains) * frames * n);
    out.stats.resize(static_cast<std::size_t>(cfg.chains));
    const double sigma = cfg.sigma(p.t0());

    parallel_for(static_cast<std::size_t>(cfg.chains), threads, [&](std::size_t chain) {
        GasState s = init_state(cfg, c, domain, p, chain);
        ChainRng rng(cfg.seed, chain);
        ChainStats& st = out.stats[chain];
        std::size_t frame = 0;
        for (long k = 1; k <= cfg.sweeps; ++k) {
            sweep(s, p, domain, rng, sigma, st);
            if (k % cfg.resync_interval == 0 || k == cfg.sweeps) {
                const double fresh = discrete_energy(p, s.z).H;
                const double rel = std::abs(fresh - s.energy) / std::max(1.0, std::abs(fresh));
                st.max_resync_error = std::max(st.max_resync_error, rel);
                if (!(rel <= 1e-8))
                    throw ToleranceError("sampler: cached energy drifted by " + std::to_string(rel) +
                                         " (relative) from recomputation");
                s.energy = fresh;
            }
            if (frame < frames && out.sweeps[frame] == k) {
                std::copy(s.z.begin(), s.z.end(), out.positions.begin() + static_cast<std::ptrdiff_t>((chain * frames + frame) * n));
                ++frame;
            }
        }
    });
    return out;
}

} // namespace nmm
