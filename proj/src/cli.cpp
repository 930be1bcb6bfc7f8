#include "nmm/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <thread>

namespace nmm::cli {

using io::InputError;
using io::json;
namespace fs = std::filesystem;

namespace {

// ---------------------------------------------------------------------------
// Config parsing

class Section {
public:
    Section(const json& j, std::string name) : j_(j), name_(std::move(name))
    {
        if (!j_.is_object())
            throw InputError(name_ + ": expected an object");
    }

    void allow(std::initializer_list<const char*> keys) const
    {
        for (const auto& [k, v] : j_.items()) {
            bool known = false;
            for (const char* key : keys)
                known = known || k == key;
            if (!known)
                throw InputError(name_ + ": unknown field \"" + k + "\"");
        }
    }

    bool has(const char* key) const { return j_.contains(key) && !j_[key].is_null(); }

    void get(const char* key, double& out) const
    {
        if (!has(key))
            return;
        if (!j_[key].is_number())
            throw InputError(path(key) + ": expected a number");
        out = j_[key].get<double>();
    }

    template <class Int>
    void get_int(const char* key, Int& out) const
    {
        if (!has(key))
            return;
        const auto& v = j_[key];
        if (!v.is_number_integer() || (std::is_unsigned_v<Int> && !v.is_number_unsigned()))
            throw InputError(path(key) + (std::is_unsigned_v<Int> ? ": expected a non-negative integer" : ": expected an integer"));
        out = v.get<Int>();
    }

    void get(const char* key, bool& out) const
    {
        if (!has(key))
            return;
        if (!j_[key].is_boolean())
            throw InputError(path(key) + ": expected true or false");
        out = j_[key].get<bool>();
    }

    const json& operator[](const char* key) const { return j_[key]; }
    std::string path(const char* key) const { return name_ + "." + key; }

private:
    const json& j_;
    std::string name_;
};

template <class Fn>
void validated(const std::string& what, Fn&& fn)
{
    try {
        fn();
    } catch (const std::invalid_argument& e) {
        throw InputError(what + ": " + e.what());
    }
}

json optional_number(const std::optional<double>& x)
{
    return x ? json(*x) : json(nullptr);
}

json number_or_null(double x)
{
    return std::isfinite(x) ? json(x) : json(nullptr);
}

// ---------------------------------------------------------------------------
// Stages

using Clock = std::chrono::steady_clock;

void log_timing(const Context& ctx, const std::string& stage, Clock::time_point start)
{
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    std::ofstream f(ctx.out / "timing.log", std::ios::app);
    f << stage << " " << secs << " s\n";
}

void prepare_output(const Context& ctx)
{
    fs::create_directories(ctx.out);
    // The output location is an invocation detail, not part of the run.
    RunConfig resolved = ctx.config;
    resolved.output.reset();
    io::write_json(ctx.out / "config.json", to_json(resolved));
}

SolveResult solve_stage(const Context& ctx)
{
    const auto& c = ctx.config;
    auto res = c.recenter ? solve_shifted(c.potential, c.solver) : solve(c.potential, c.solver);
    io::write_json(ctx.out / "curve.json", io::to_json(res.curve));
    io::write_json(ctx.out / "solve_report.json", io::to_json(res.report));
    return res;
}

cplx potential_minimizer(const RunConfig& c)
{
    const auto mins = potential_minima(c.potential, c.solver.minimum_search_radius);
    if (mins.empty())
        throw RegimeError("potential has no local minimum in the search square");
    cplx best = mins.front();
    for (const auto& m : mins)
        if (std::abs(m) < std::abs(best))
            best = m;
    return best;
}

DomainSpec resolve_domain(const RunConfig& c)
{
    if (c.domain)
        return *c.domain;
    return default_domain(c.potential, potential_minimizer(c), c.auto_domain.safety, c.auto_domain.cap_factor);
}

VerifyOptions verify_options(const Context& ctx)
{
    const auto& e = ctx.config.energy_map;
    VerifyOptions o;
    o.nx = e.nx;
    o.ny = e.ny;
    o.interior_tol = e.interior_tol;
    o.exterior_tol = e.exterior_tol;
    o.band_rel = e.band_rel;
    o.quadrature = e.quadrature;
    o.threads = ctx.threads;
    return o;
}

struct EnergyStage {
    VerifyReport report;
    DomainSpec domain;
};

EnergyStage energy_stage(const Context& ctx, const PolynomialCurve& curve)
{
    const auto& c = ctx.config;
    EnergyStage out{{}, resolve_domain(c)};
    const EnergyField field(Potential(c.potential), curve, c.energy_map.quadrature);
    const auto opt = verify_options(ctx);
    const auto grid = field_grid(field, out.domain, opt);
    out.report = verify_field(grid, field, out.domain, opt, potential_minimizer(c));
    io::write_field_csv(ctx.out / "field.csv", grid);
    json v = io::to_json(out.report);
    v["domain"] = io::to_json(out.domain);
    io::write_json(ctx.out / "verify.json", v);
    return out;
}

int verify_exit_code(const VerifyReport& r)
{
    if (r.pass)
        return ok;
    std::cerr << "energy-map: variational conditions fail (interior max |E| = " << r.max_interior_abs
              << ", exterior min E = " << r.min_exterior << ")\n";
    if (!r.interior_pass)
        return tolerance_failure;
    return regime_failure;
}

SampleSet sample_stage(const Context& ctx, const PolynomialCurve& curve, const DomainSpec& domain)
{
    const auto& c = ctx.config;
    const Potential p(c.potential);
    auto s = run(c.sampler, p, curve, domain, ctx.threads);
    io::write_samples_csv(ctx.out / "samples.csv", s);
    json chains = json::array();
    double rate = 0.0;
    for (const auto& st : s.stats) {
        chains.push_back(io::to_json(st));
        rate += st.acceptance_rate();
    }
    json side = {{"N", s.N},
                 {"chains", s.chains},
                 {"t0", s.t0},
                 {"seed", c.sampler.seed},
                 {"proposal_sigma", c.sampler.sigma(s.t0)},
                 {"recorded_sweeps", s.frames()},
                 {"domain", io::to_json(domain)},
                 {"acceptance_rate", rate / s.chains},
                 {"chain_stats", chains}};
    io::write_json(ctx.out / "samples.json", side);
    return s;
}

struct AnalysisSummary {
    json j;
    bool pass = true;
};

AnalysisSummary analyze_stage(const Context& ctx, const SampleSet& s, const PolynomialCurve& curve)
{
    const auto& a = ctx.config.analysis;
    AnalysisSummary out;

    // Density on the bounding box of the droplet, widened by the dilation.
    const double dilation = a.dilation.value_or(1.0 + 2.0 / std::sqrt(static_cast<double>(s.N)));
    const CurveOutline outline(curve);
    const auto b = outline.bounds();
    const cplx o = centroid(curve);
    const double grow = std::max(dilation, 1.0) * 1.1;
    const std::array<double, 4> box{o.real() + (b[0] - o.real()) * grow, o.real() + (b[1] - o.real()) * grow,
                                    o.imag() + (b[2] - o.imag()) * grow, o.imag() + (b[3] - o.imag()) * grow};
    const auto density = histogram(s, box, a.bins, a.bins);
    io::write_density_csv(ctx.out / "density.csv", density);

    const auto v = interior_moments(curve, a.kmax).v;
    json moments = json::array();
    bool moments_pass = true;
    bool moments_evaluated = false;
    for (int k = 0; k <= a.kmax; ++k) {
        const auto e = moment_estimate(s, k);
        const cplx pred = k == 0 ? cplx(s.t0, 0.0) : v[static_cast<std::size_t>(k)];
        json m = {{"k", k}, {"mean", io::complex_to_json(e.mean)}, {"predicted", io::complex_to_json(pred)}};
        bool within = true;
        if (k == 0) {
            within = e.mean == cplx(s.t0, 0.0);
            m["stderr"] = nullptr;
            m["z"] = nullptr;
        } else if (e.standard_error) {
            const auto& se = *e.standard_error;
            const cplx diff = e.mean - pred;
            auto zscore = [](double d, double sd) { return sd > 0 ? json(d / sd) : json(nullptr); };
            m["stderr"] = json::array({se[0], se[1]});
            m["z"] = json::array({zscore(diff.real(), se[0]), zscore(diff.imag(), se[1])});
            within = std::abs(diff.real()) <= a.moment_sigmas * se[0] && std::abs(diff.imag()) <= a.moment_sigmas * se[1];
            moments_evaluated = moments_evaluated || k <= a.check_kmax;
        } else {
            m["stderr"] = nullptr;
            m["z"] = nullptr;
        }
        m["within_tolerance"] = (k == 0 || e.standard_error) ? json(within) : json(nullptr);
        m["checked"] = k <= a.check_kmax;
        if ((k == 0 || e.standard_error) && k <= a.check_kmax)
            moments_pass = moments_pass && within;
        moments.push_back(m);
    }
    io::write_json(ctx.out / "moments.json", {{"t0", s.t0},
                                              {"N", s.N},
                                              {"chains", s.chains},
                                              {"frames", s.frames()},
                                              {"sigmas", a.moment_sigmas},
                                              {"moments", moments}});

    const double support = support_fraction(s, curve, dilation);
    const auto bulk = bulk_density(density, curve, s.t0, a.min_expected);
    const bool support_pass = support >= a.min_support_fraction;
    const bool density_evaluated = bulk.bins > 0;
    const double ratio = density_evaluated ? bulk.mean / bulk.expected : std::nan("");
    const bool density_pass = !density_evaluated || std::abs(ratio - 1.0) <= a.density_rel_tol;
    io::write_json(ctx.out / "support.json", {{"dilation", dilation},
                                              {"support_fraction", support},
                                              {"support_pass", support_pass},
                                              {"bulk_bins", bulk.bins},
                                              {"bulk_mean_density", number_or_null(bulk.mean)},
                                              {"expected_density", bulk.expected},
                                              {"density_ratio", number_or_null(ratio)},
                                              {"density_pass", density_evaluated ? json(density_pass) : json(nullptr)}});

    const auto wc = weak_convergence_test(s, curve, standard_test_functions(curve, s.t0));
    json entries = json::array();
    double max_z = 0.0;
    bool have_z = false;
    for (const auto& e : wc) {
        entries.push_back({{"name", e.name},
                           {"empirical", e.empirical},
                           {"predicted", e.predicted},
                           {"stderr", optional_number(e.standard_error)},
                           {"z_score", optional_number(e.z_score)}});
        if (e.z_score) {
            max_z = std::max(max_z, std::abs(*e.z_score));
            have_z = true;
        }
    }
    io::write_json(ctx.out / "weak_convergence.json",
                   {{"max_abs_z", have_z ? json(max_z) : json(nullptr)}, {"entries", entries}});

    out.pass = moments_pass && support_pass && density_pass;
    out.j = {{"pass", out.pass},
             {"moments_pass", moments_evaluated ? json(moments_pass) : json(nullptr)},
             {"support_fraction", support},
             {"support_pass", support_pass},
             {"density_ratio", number_or_null(ratio)},
             {"density_pass", density_evaluated ? json(density_pass) : json(nullptr)},
             {"weak_convergence_max_abs_z", have_z ? json(max_z) : json(nullptr)}};
    return out;
}

// Maps exceptions to exit codes.
int guarded(const std::function<int()>& fn)
{
    try {
        return fn();
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return input_error;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return input_error;
    } catch (const RegimeError& e) {
        std::cerr << "regime failure: " << e.what() << "\n";
        return regime_failure;
    } catch (const ReflectionDomainError& e) {
        std::cerr << "regime failure: " << e.what() << "\n";
        return regime_failure;
    } catch (const std::exception& e) {
        std::cerr << "tolerance failure: " << e.what() << "\n";
        return tolerance_failure;
    }
}

} // namespace

// ---------------------------------------------------------------------------

RunConfig parse_config(const json& j)
{
    Section top(j, "config");
    top.allow({"schema_version", "potential", "domain", "solver", "energy_map", "sampler", "analysis", "output"});
    if (!top.has("schema_version") || !j["schema_version"].is_number_integer())
        throw InputError("config: schema_version is required");
    if (j["schema_version"].get<long long>() != RunConfig::schema_version)
        throw InputError("config: unsupported schema_version " + j["schema_version"].dump());

    RunConfig c;
    if (!top.has("potential"))
        throw InputError("config: potential is required");
    c.potential = io::moments_from_json(j["potential"]);
    validated("potential", [&] { validate_moments(c.potential); });

    if (top.has("domain")) {
        Section d(j["domain"], "domain");
        if (!d.has("kind") || !d["kind"].is_string())
            throw InputError("domain.kind: expected \"auto\", \"disk\" or \"polygon\"");
        const auto kind = d["kind"].get<std::string>();
        if (kind == "auto") {
            d.allow({"kind", "safety", "cap_factor"});
            d.get("safety", c.auto_domain.safety);
            d.get("cap_factor", c.auto_domain.cap_factor);
            if (!(c.auto_domain.safety > 0 && c.auto_domain.safety <= 1) || !(c.auto_domain.cap_factor > 0))
                throw InputError("domain: safety must lie in (0, 1] and cap_factor must be positive");
        } else if (kind == "disk") {
            d.allow({"kind", "center", "radius"});
            cplx center{};
            double radius = 0.0;
            if (d.has("center"))
                center = io::complex_from_json(d["center"], "domain.center");
            d.get("radius", radius);
            validated("domain", [&] { c.domain = DomainSpec::disk(center, radius); });
        } else if (kind == "polygon") {
            d.allow({"kind", "vertices"});
            if (!d.has("vertices") || !d["vertices"].is_array())
                throw InputError("domain.vertices: expected an array");
            std::vector<cplx> vs;
            for (const auto& v : d["vertices"])
                vs.push_back(io::complex_from_json(v, "domain.vertices"));
            validated("domain", [&] { c.domain = DomainSpec::polygon(vs); });
        } else {
            throw InputError("domain.kind: expected \"auto\", \"disk\" or \"polygon\"");
        }
    }

    if (top.has("solver")) {
        Section s(j["solver"], "solver");
        s.allow({"newton_tol", "max_newton_iters", "continuation_steps", "t0_start_fraction", "max_step_refinements",
                 "minimum_search_radius", "recenter"});
        s.get("newton_tol", c.solver.newton_tol);
        s.get_int("max_newton_iters", c.solver.max_newton_iters);
        s.get_int("continuation_steps", c.solver.continuation_steps);
        s.get("t0_start_fraction", c.solver.t0_start_fraction);
        s.get_int("max_step_refinements", c.solver.max_step_refinements);
        s.get("minimum_search_radius", c.solver.minimum_search_radius);
        s.get("recenter", c.recenter);
    }
    validated("solver", [&] { c.solver.validate(); });

    if (top.has("energy_map")) {
        Section e(j["energy_map"], "energy_map");
        e.allow({"nx", "ny", "interior_tol", "exterior_tol", "band_rel", "panels", "panel_tol", "max_depth",
                 "quadrature_tol"});
        e.get_int("nx", c.energy_map.nx);
        e.get_int("ny", c.energy_map.ny);
        e.get("interior_tol", c.energy_map.interior_tol);
        e.get("exterior_tol", c.energy_map.exterior_tol);
        e.get("band_rel", c.energy_map.band_rel);
        e.get_int("panels", c.energy_map.quadrature.panels);
        e.get("panel_tol", c.energy_map.quadrature.panel_tol);
        e.get_int("max_depth", c.energy_map.quadrature.max_depth);
        e.get("quadrature_tol", c.energy_map.quadrature.tol);
    }
    {
        const auto& e = c.energy_map;
        if (e.nx < 2 || e.ny < 2 || !(e.interior_tol > 0) || !(e.exterior_tol > 0) || !(e.band_rel >= 0) ||
            e.quadrature.panels < 1 || !(e.quadrature.panel_tol > 0) || e.quadrature.max_depth < 0 ||
            !(e.quadrature.tol > 0))
            throw InputError("energy_map: grid sizes must be >= 2 and tolerances positive");
    }

    if (top.has("sampler")) {
        Section s(j["sampler"], "sampler");
        s.allow({"N", "sweeps", "burn_in", "proposal_sigma", "seed", "thinning", "chains", "resync_interval"});
        s.get_int("N", c.sampler.N);
        s.get_int("sweeps", c.sampler.sweeps);
        s.get_int("burn_in", c.sampler.burn_in);
        s.get("proposal_sigma", c.sampler.proposal_sigma);
        s.get_int("seed", c.sampler.seed);
        s.get_int("thinning", c.sampler.thinning);
        s.get_int("chains", c.sampler.chains);
        s.get_int("resync_interval", c.sampler.resync_interval);
    }
    validated("sampler", [&] { c.sampler.validate(); });

    if (top.has("analysis")) {
        Section a(j["analysis"], "analysis");
        a.allow({"bins", "dilation", "kmax", "check_kmax", "min_expected", "min_support_fraction", "density_rel_tol",
                 "moment_sigmas"});
        a.get_int("bins", c.analysis.bins);
        if (a.has("dilation")) {
            double d = 0.0;
            a.get("dilation", d);
            c.analysis.dilation = d;
        }
        a.get_int("kmax", c.analysis.kmax);
        a.get_int("check_kmax", c.analysis.check_kmax);
        a.get("min_expected", c.analysis.min_expected);
        a.get("min_support_fraction", c.analysis.min_support_fraction);
        a.get("density_rel_tol", c.analysis.density_rel_tol);
        a.get("moment_sigmas", c.analysis.moment_sigmas);
    }
    {
        const auto& a = c.analysis;
        if (a.bins < 1 || a.kmax < 0 || a.check_kmax < 0 || (a.dilation && !(*a.dilation > 0)) || !(a.min_expected >= 0) ||
            !(a.moment_sigmas > 0) || !(a.density_rel_tol > 0))
            throw InputError("analysis: bins >= 1, kmax >= 0 and positive dilation and tolerances required");
    }

    if (top.has("output")) {
        if (!j["output"].is_string())
            throw InputError("config.output: expected a string");
        c.output = j["output"].get<std::string>();
    }
    return c;
}

json to_json(const RunConfig& c)
{
    json j;
    j["schema_version"] = RunConfig::schema_version;
    j["potential"] = io::to_json(c.potential);
    if (c.domain)
        j["domain"] = io::to_json(*c.domain);
    else
        j["domain"] = {{"kind", "auto"}, {"safety", c.auto_domain.safety}, {"cap_factor", c.auto_domain.cap_factor}};
    j["solver"] = {{"newton_tol", c.solver.newton_tol},
                   {"max_newton_iters", c.solver.max_newton_iters},
                   {"continuation_steps", c.solver.continuation_steps},
                   {"t0_start_fraction", c.solver.t0_start_fraction},
                   {"max_step_refinements", c.solver.max_step_refinements},
                   {"minimum_search_radius", c.solver.minimum_search_radius},
                   {"recenter", c.recenter}};
    const auto& e = c.energy_map;
    j["energy_map"] = {{"nx", e.nx},
                       {"ny", e.ny},
                       {"interior_tol", e.interior_tol},
                       {"exterior_tol", e.exterior_tol},
                       {"band_rel", e.band_rel},
                       {"panels", e.quadrature.panels},
                       {"panel_tol", e.quadrature.panel_tol},
                       {"max_depth", e.quadrature.max_depth},
                       {"quadrature_tol", e.quadrature.tol}};
    const auto& s = c.sampler;
    j["sampler"] = {{"N", s.N},
                    {"sweeps", s.sweeps},
                    {"burn_in", s.burn_in},
                    {"proposal_sigma", s.proposal_sigma},
                    {"seed", s.seed},
                    {"thinning", s.thinning},
                    {"chains", s.chains},
                    {"resync_interval", s.resync_interval}};
    const auto& a = c.analysis;
    j["analysis"] = {{"bins", a.bins},
                     {"dilation", optional_number(a.dilation)},
                     {"kmax", a.kmax},
                     {"check_kmax", a.check_kmax},
                     {"min_expected", a.min_expected},
                     {"min_support_fraction", a.min_support_fraction},
                     {"density_rel_tol", a.density_rel_tol},
                     {"moment_sigmas", a.moment_sigmas}};
    if (c.output)
        j["output"] = *c.output;
    return j;
}

int cmd_solve_curve(const Context& ctx)
{
    return guarded([&] {
        const auto start = Clock::now();
        prepare_output(ctx);
        solve_stage(ctx);
        log_timing(ctx, "solve-curve", start);
        return int(ok);
    });
}

int cmd_energy_map(const Context& ctx)
{
    return guarded([&] {
        const auto start = Clock::now();
        prepare_output(ctx);
        const auto res = solve_stage(ctx);
        const auto e = energy_stage(ctx, res.curve);
        log_timing(ctx, "energy-map", start);
        return verify_exit_code(e.report);
    });
}

int cmd_sample(const Context& ctx)
{
    return guarded([&] {
        const auto start = Clock::now();
        prepare_output(ctx);
        const auto res = solve_stage(ctx);
        sample_stage(ctx, res.curve, resolve_domain(ctx.config));
        log_timing(ctx, "sample", start);
        return int(ok);
    });
}

int cmd_analyze(const Context& ctx, const fs::path& samples)
{
    return guarded([&] {
        const auto start = Clock::now();
        fs::path csv = samples;
        if (fs::is_directory(csv))
            csv /= "samples.csv";
        if (!fs::exists(csv))
            throw InputError("sample file " + csv.string() + " does not exist");
        const auto s = io::read_samples_csv(csv, ctx.config.potential.t0);
        prepare_output(ctx);
        const auto res = solve_stage(ctx);
        const auto summary = analyze_stage(ctx, s, res.curve);
        io::write_json(ctx.out / "analysis.json", summary.j);
        log_timing(ctx, "analyze", start);
        return int(ok);
    });
}

int cmd_pipeline(const Context& ctx)
{
    json stages = json::object();
    std::string failed;
    auto finish = [&](int code) {
        json summary = {{"pass", code == ok}, {"exit_code", code}};
        if (!failed.empty())
            summary["failed_stage"] = failed;
        summary["stages"] = stages;
        io::write_json(ctx.out / "summary.json", summary);
        return code;
    };

    prepare_output(ctx);
    const auto start = Clock::now();
    std::optional<SolveResult> solved;
    int code = guarded([&] {
        solved = solve_stage(ctx);
        stages["solve"] = {{"pass", true},
                           {"residual", solved->report.residual},
                           {"cusp_margin", solved->report.cusp_margin}};
        return int(ok);
    });
    if (code != ok) {
        failed = "solve";
        return finish(code);
    }

    std::optional<EnergyStage> energy;
    code = guarded([&] {
        energy = energy_stage(ctx, solved->curve);
        const auto& r = energy->report;
        stages["energy_map"] = {{"pass", r.pass},
                                {"max_interior_abs", number_or_null(r.max_interior_abs)},
                                {"min_exterior", number_or_null(r.min_exterior)},
                                {"curve_inside_domain", r.curve_inside_domain}};
        return verify_exit_code(r);
    });
    if (code != ok) {
        failed = "energy_map";
        return finish(code);
    }

    std::optional<SampleSet> samples;
    code = guarded([&] {
        samples = sample_stage(ctx, solved->curve, energy->domain);
        double rate = 0.0, drift = 0.0;
        for (const auto& st : samples->stats) {
            rate += st.acceptance_rate();
            drift = std::max(drift, st.max_resync_error);
        }
        stages["sample"] = {{"pass", true},
                            {"acceptance_rate", rate / samples->chains},
                            {"max_resync_error", drift}};
        return int(ok);
    });
    if (code != ok) {
        failed = "sample";
        return finish(code);
    }

    code = guarded([&] {
        const auto summary = analyze_stage(ctx, *samples, solved->curve);
        stages["analyze"] = summary.j;
        return summary.pass ? int(ok) : int(tolerance_failure);
    });
    if (code != ok)
        failed = "analyze";
    log_timing(ctx, "pipeline", start);
    return finish(code);
}

int main(int argc, char** argv)
{
    CLI::App app{"Normal matrix model toolkit: droplet shapes, energy fields and log-gas sampling"};
    app.require_subcommand(1);
    std::string config_path, out_dir, samples_path;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    std::optional<std::uint64_t> seed;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON run configuration")->required();
        sub->add_option("--out", out_dir, "output directory (overrides the config)");
        sub->add_option("--threads", threads, "worker thread cap")->check(CLI::PositiveNumber);
        sub->add_option("--seed", seed, "sampler seed (overrides the config)");
    };
    auto* solve_cmd = app.add_subcommand("solve-curve", "solve the inverse moment problem");
    auto* energy_cmd = app.add_subcommand("energy-map", "evaluate and verify the energy field on a grid");
    auto* sample_cmd = app.add_subcommand("sample", "run the Coulomb gas sampler");
    auto* analyze_cmd = app.add_subcommand("analyze", "compare samples with the equilibrium measure");
    auto* pipeline_cmd = app.add_subcommand("pipeline", "solve, map, sample and analyze");
    for (auto* sub : {solve_cmd, energy_cmd, sample_cmd, analyze_cmd, pipeline_cmd})
        add_common(sub);
    analyze_cmd->add_option("--samples", samples_path, "samples.csv or a directory containing it")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? ok : input_error;
    }

    Context ctx;
    ctx.threads = threads;
    const int parsed = guarded([&] {
        const auto j = io::read_json(config_path);
        ctx.config = parse_config(j);
        if (seed)
            ctx.config.sampler.seed = *seed;
        if (!out_dir.empty())
            ctx.config.output = out_dir;
        if (!ctx.config.output)
            throw InputError("no output directory: pass --out or set \"output\" in the config");
        ctx.out = *ctx.config.output;
        return int(ok);
    });
    if (parsed != ok)
        return parsed;

    if (solve_cmd->parsed())
        return cmd_solve_curve(ctx);
    if (energy_cmd->parsed())
        return cmd_energy_map(ctx);
    if (sample_cmd->parsed())
        return cmd_sample(ctx);
    if (analyze_cmd->parsed())
        return cmd_analyze(ctx, samples_path);
    return cmd_pipeline(ctx);
}

} // namespace nmm::cli
