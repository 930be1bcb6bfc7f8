#include "nmm/moment_inverse.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>

namespace nmm {

void SolverConfig::validate() const
{
    if (!(newton_tol > 0.0))
        throw std::invalid_argument("solver: newton_tol must be positive");
    if (max_newton_iters < 1)
        throw std::invalid_argument("solver: max_newton_iters must be >= 1");
    if (continuation_steps < 1)
        throw std::invalid_argument("solver: continuation_steps must be >= 1");
    if (!(t0_start_fraction > 0.0 && t0_start_fraction <= 1.0))
        throw std::invalid_argument("solver: t0_start_fraction must lie in (0, 1]");
    if (max_step_refinements < 0)
        throw std::invalid_argument("solver: max_step_refinements must be >= 0");
    if (!(minimum_search_radius > 0.0))
        throw std::invalid_argument("solver: minimum_search_radius must be positive");
}

ScaledParams to_scaled(const PolynomialCurve& c)
{
    ScaledParams p;
    p.rho = c.r() * c.r();
    p.alpha.resize(c.a().size());
    double rj = 1.0;
    for (std::size_t j = 0; j < c.a().size(); ++j) {
        p.alpha[j] = c.a()[j] / rj;
        rj *= c.r();
    }
    return p;
}

PolynomialCurve from_scaled(const ScaledParams& p)
{
    if (!(p.rho > 0.0))
        throw std::invalid_argument("from_scaled: rho must be positive");
    const double r = std::sqrt(p.rho);
    std::vector<cplx> a(p.alpha.size());
    double rj = 1.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        a[j] = p.alpha[j] * rj;
        rj *= r;
    }
    return PolynomialCurve(r, std::move(a));
}

void validate_moments(const MomentVector& t)
{
    if (!(t.t0 > 0.0) || !std::isfinite(t.t0))
        throw std::invalid_argument("moments: t0 must be finite and positive");
    for (const auto& v : t.t)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::invalid_argument("moments: non-finite t_j");
    if (!(std::abs(t(2)) < 0.5))
        throw std::invalid_argument("moments: requires |t2| < 1/2");
}

ScaledParams initial_guess(const MomentVector& t)
{
    if (!(std::abs(t(2)) < 0.5))
        throw std::invalid_argument("initial_guess: requires |t2| < 1/2");
    const int n = t.degree();
    ScaledParams p;
    p.rho = t.t0;
    p.alpha.assign(static_cast<std::size_t>(n + 1), cplx{});
    for (int j = 1; j <= n; ++j)
        p.alpha[static_cast<std::size_t>(j)] = static_cast<double>(j + 1) * std::conj(t(j + 1));
    return p;
}

double cusp_margin(const PolynomialCurve& c)
{
    return 1.0 - c.critical_radius();
}

namespace {

// Real unknowns: (rho, Re a0, Im a0, ..., Re an, Im an).
Eigen::VectorXd pack(const ScaledParams& p)
{
    Eigen::VectorXd x(1 + 2 * static_cast<Eigen::Index>(p.alpha.size()));
    x(0) = p.rho;
    for (std::size_t j = 0; j < p.alpha.size(); ++j) {
        x(1 + 2 * static_cast<Eigen::Index>(j)) = p.alpha[j].real();
        x(2 + 2 * static_cast<Eigen::Index>(j)) = p.alpha[j].imag();
    }
    return x;
}

ScaledParams unpack(const Eigen::VectorXd& x)
{
    ScaledParams p;
    p.rho = x(0);
    p.alpha.resize(static_cast<std::size_t>((x.size() - 1) / 2));
    for (std::size_t j = 0; j < p.alpha.size(); ++j)
        p.alpha[j] = {x(1 + 2 * static_cast<Eigen::Index>(j)), x(2 + 2 * static_cast<Eigen::Index>(j))};
    return p;
}

Eigen::VectorXd moments_vector(const MomentVector& t, int n)
{
    Eigen::VectorXd y(2 * n + 3);
    y(0) = t.t0;
    for (int j = 1; j <= n + 1; ++j) {
        y(2 * j - 1) = t(j).real();
        y(2 * j) = t(j).imag();
    }
    return y;
}

std::optional<Eigen::VectorXd> forward(const Eigen::VectorXd& x, int n)
{
    if (!(x(0) > 0.0) || !x.allFinite())
        return std::nullopt;
    return moments_vector(forward_moments(from_scaled(unpack(x))), n);
}

struct NewtonOutcome {
    Eigen::VectorXd x;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

NewtonOutcome newton(Eigen::VectorXd x, const Eigen::VectorXd& target, int n, const SolverConfig& cfg)
{
    const Eigen::Index dim = x.size();
    NewtonOutcome out;
    auto fx = forward(x, n);
    if (!fx) {
        out.x = x;
        return out;
    }
    Eigen::VectorXd res = *fx - target;
    double norm = res.lpNorm<Eigen::Infinity>();
    const double tol = cfg.newton_tol * std::max(1.0, target.lpNorm<Eigen::Infinity>());
    bool polished = false;

    for (int it = 0; it < cfg.max_newton_iters; ++it) {
        if (norm <= tol) {
            if (polished)
                break;
            polished = true;
        }
        // Central-difference Jacobian.
        Eigen::MatrixXd jac(dim, dim);
        for (Eigen::Index i = 0; i < dim; ++i) {
            const double typical = i == 0 ? target(0) : 1.0;
            const double h = 1e-6 * std::max(std::abs(x(i)), typical);
            Eigen::VectorXd xp = x, xm = x;
            xp(i) += h;
            xm(i) -= h;
            auto fp = forward(xp, n);
            auto fm = forward(xm, n);
            if (!fp || !fm) {
                out.x = x;
                out.residual = norm;
                out.iterations = it;
                return out;
            }
            jac.col(i) = (*fp - *fm) / (2.0 * h);
        }
        const Eigen::VectorXd step = jac.colPivHouseholderQr().solve(-res);
        if (!step.allFinite())
            break;

        // Backtracking on the residual norm; rho must stay positive.
        double lambda = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 12; ++ls, lambda *= 0.5) {
            Eigen::VectorXd trial = x + lambda * step;
            if (!(trial(0) > 0.0))
                continue;
            auto ft = forward(trial, n);
            if (!ft)
                continue;
            Eigen::VectorXd rt = *ft - target;
            const double nt = rt.lpNorm<Eigen::Infinity>();
            if (nt < (1.0 - 1e-4 * lambda) * norm || (norm <= tol && nt <= norm)) {
                x = trial;
                res = rt;
                norm = nt;
                accepted = true;
                break;
            }
        }
        out.iterations = it + 1;
        if (!accepted)
            break;
    }
    out.x = x;
    out.residual = norm;
    out.converged = norm <= tol;
    return out;
}

MomentVector continuation_target(const MomentVector& t, double s)
{
    // t0 scales with s; t1 with sqrt(s) so the enclosure condition
    // |t1|^2 < t0 (1/2 - |t2|) keeps its form along the ramp.
    MomentVector out = t;
    out.t0 = t.t0 * s;
    if (!out.t.empty())
        out.t[0] *= std::sqrt(s);
    return out;
}

} // namespace

SolveResult solve(const MomentVector& t_in, const SolverConfig& cfg)
{
    cfg.validate();
    validate_moments(t_in);
    MomentVector t = t_in;
    if (t.t.empty())
        t.t.push_back(cplx{});
    const int n = t.degree();

    SolveReport report;
    const double f0 = cfg.t0_start_fraction;
    const int steps = cfg.continuation_steps;

    Eigen::VectorXd x = pack(initial_guess(continuation_target(t, f0)));
    auto run_to = [&](double s, Eigen::VectorXd start) {
        return newton(std::move(start), moments_vector(continuation_target(t, s), n), n, cfg);
    };

    // First point of the ramp straight from the small-area guess.
    double s_done = f0;
    {
        auto o = run_to(s_done, x);
        report.iterations.push_back(o.iterations);
        if (!o.converged)
            throw RegimeError("solve: Newton failed to converge at the start of the continuation");
        x = o.x;
    }

    for (int k = 1; k <= steps; ++k) {
        const double s_next = std::pow(f0, 1.0 - static_cast<double>(k) / steps);
        // Bisect the step in log t0 whenever Newton fails.
        std::vector<double> pending{s_next};
        int depth = 0;
        while (!pending.empty()) {
            const double s = pending.back();
            auto o = run_to(s, x);
            report.iterations.push_back(o.iterations);
            if (o.converged) {
                x = o.x;
                s_done = s;
                pending.pop_back();
                continue;
            }
            if (++depth > cfg.max_step_refinements)
                throw RegimeError("solve: no convergence along the t0 continuation "
                                  "(outside small-area regime / near cusp)");
            pending.push_back(std::sqrt(s_done * s));
        }
    }

    PolynomialCurve curve = from_scaled(unpack(x));
    if (!is_simple_positively_oriented(curve))
        throw RegimeError("solve: converged parameters do not give a simple positively oriented curve "
                          "(outside small-area regime / near cusp)");

    const MomentVector got = forward_moments(curve);
    double resid = std::abs(got.t0 - t.t0);
    for (int j = 1; j <= n + 1; ++j)
        resid = std::max(resid, std::abs(got(j) - t(j)));
    report.residual = resid;
    report.cusp_margin = cusp_margin(curve);
    report.encloses_origin = encloses_origin(curve);
    return {std::move(curve), std::move(report)};
}

// ---------------------------------------------------------------------------
// Origin shift

namespace {

cplx poly_value(const MomentVector& t, cplx z)
{
    cplx acc{};
    for (int k = static_cast<int>(t.t.size()); k >= 1; --k)
        acc = (acc + t(k)) * z;
    return acc;
}

cplx poly_derivative(const MomentVector& t, cplx z)
{
    cplx acc{};
    for (int k = static_cast<int>(t.t.size()); k >= 1; --k)
        acc = acc * z + static_cast<double>(k) * t(k);
    return acc;
}

cplx poly_second_derivative(const MomentVector& t, cplx z)
{
    cplx acc{};
    for (int k = static_cast<int>(t.t.size()); k >= 2; --k)
        acc = acc * z + static_cast<double>(k * (k - 1)) * t(k);
    return acc;
}

double potential_u(const MomentVector& t, cplx z)
{
    return std::norm(z) - 2.0 * poly_value(t, z).real();
}

} // namespace

std::vector<cplx> potential_minima(const MomentVector& t, double radius)
{
    const int g = 201;
    const double h = 2.0 * radius / (g - 1);
    std::vector<double> u(static_cast<std::size_t>(g * g));
    auto node = [&](int i, int j) { return cplx{-radius + i * h, -radius + j * h}; };
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j)
            u[static_cast<std::size_t>(i * g + j)] = potential_u(t, i == (g - 1) / 2 && j == (g - 1) / 2 ? cplx{} : node(i, j));

    std::vector<cplx> minima;
    for (int i = 1; i < g - 1; ++i) {
        for (int j = 1; j < g - 1; ++j) {
            const double c = u[static_cast<std::size_t>(i * g + j)];
            bool is_min = true;
            for (int di = -1; di <= 1 && is_min; ++di)
                for (int dj = -1; dj <= 1; ++dj)
                    if ((di || dj) && !(c < u[static_cast<std::size_t>((i + di) * g + j + dj)])) {
                        is_min = false;
                        break;
                    }
            if (!is_min)
                continue;

            // Newton on grad U / 2 = z - conj(P'(z)).
            cplx z = (i == (g - 1) / 2 && j == (g - 1) / 2) ? cplx{} : node(i, j);
            bool ok = false;
            for (int it = 0; it < 60; ++it) {
                const cplx gz = z - std::conj(poly_derivative(t, z));
                if (gz == cplx{}) {
                    ok = true;
                    break;
                }
                const cplx q = poly_second_derivative(t, z);
                Eigen::Matrix2d jac;
                jac << 1.0 - q.real(), q.imag(), q.imag(), 1.0 + q.real();
                const Eigen::Vector2d step = jac.fullPivLu().solve(Eigen::Vector2d(-gz.real(), -gz.imag()));
                z += cplx{step(0), step(1)};
                if (std::hypot(step(0), step(1)) <= 1e-15 * std::max(1.0, std::abs(z))) {
                    ok = true;
                    break;
                }
            }
            if (!ok || std::abs(z.real()) > radius || std::abs(z.imag()) > radius)
                continue;
            // Non-degenerate minimum: Hessian 2 [[1-a, b], [b, 1+a]] positive definite.
            if (!(std::abs(poly_second_derivative(t, z)) < 1.0))
                continue;
            bool dup = false;
            for (const auto& m : minima)
                if (std::abs(m - z) < 1e-8)
                    dup = true;
            if (!dup)
                minima.push_back(z);
        }
    }
    return minima;
}

MomentVector recenter_moments(const MomentVector& t, cplx z_star)
{
    // S_i(z + z*) - conj(z*) = sum_m m t'_m z^{m-1}, i.e.
    // t'_m = sum_{k>=m} C(k, m) t_k z*^{k-m} - [m = 1] conj(z*).
    MomentVector out;
    out.t0 = t.t0;
    const int top = static_cast<int>(t.t.size());
    out.t.assign(t.t.size(), cplx{});
    for (int m = 1; m <= top; ++m) {
        cplx acc{};
        double binom = 1.0; // C(k, m) starting at k = m
        cplx zp = 1.0;
        for (int k = m; k <= top; ++k) {
            acc += binom * t(k) * zp;
            binom = binom * (k + 1) / (k + 1 - m);
            zp *= z_star;
        }
        if (m == 1)
            acc -= std::conj(z_star);
        out.t[static_cast<std::size_t>(m - 1)] = acc;
    }
    return out;
}

SolveResult solve_shifted(const MomentVector& t_in, const SolverConfig& cfg)
{
    cfg.validate();
    validate_moments(t_in);
    MomentVector t = t_in;
    if (t.t.empty())
        t.t.push_back(cplx{});

    const auto minima = potential_minima(t, cfg.minimum_search_radius);
    if (minima.empty())
        throw RegimeError("solve_shifted: potential has no non-degenerate minimum in the search region");
    if (minima.size() > 1)
        throw RegimeError("solve_shifted: potential has several local minima (disconnected support)");
    const cplx z_star = minima.front();

    const MomentVector shifted = recenter_moments(t, z_star);
    SolveResult res = solve(shifted, cfg);
    PolynomialCurve curve = res.curve.translated(z_star);

    const MomentVector got = forward_moments(curve);
    double resid = std::abs(got.t0 - t.t0);
    for (int j = 1; j <= t.degree() + 1; ++j)
        resid = std::max(resid, std::abs(got(j) - t(j)));
    res.report.residual = resid;
    res.report.shift = z_star;
    res.report.encloses_origin = encloses_origin(curve);
    return {std::move(curve), std::move(res.report)};
}

} // namespace nmm
