#include "nmm/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace nmm::io {

json complex_to_json(cplx z)
{
    return json::array({z.real(), z.imag()});
}

cplx complex_from_json(const json& j, const std::string& what)
{
    if (j.is_number())
        return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw InputError(what + ": expected a number or [re, im]");
}

namespace {

std::vector<cplx> complex_list(const json& j, const std::string& what)
{
    if (!j.is_array())
        throw InputError(what + ": expected an array");
    std::vector<cplx> out;
    for (const auto& x : j)
        out.push_back(complex_from_json(x, what));
    return out;
}

json complex_list_to_json(const std::vector<cplx>& v)
{
    json a = json::array();
    for (const auto& z : v)
        a.push_back(complex_to_json(z));
    return a;
}

void only_keys(const json& j, std::initializer_list<const char*> keys, const std::string& what)
{
    if (!j.is_object())
        throw InputError(what + ": expected an object");
    for (const auto& [k, v] : j.items()) {
        bool known = false;
        for (const char* key : keys)
            known = known || k == key;
        if (!known)
            throw InputError(what + ": unknown field \"" + k + "\"");
    }
}

std::ofstream open_out(const std::filesystem::path& p)
{
    std::ofstream f(p, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot write " + p.string());
    return f;
}

} // namespace

json to_json(const MomentVector& m)
{
    return {{"t0", m.t0}, {"t", complex_list_to_json(m.t)}};
}

MomentVector moments_from_json(const json& j)
{
    only_keys(j, {"t0", "t"}, "moments");
    if (!j.contains("t0") || !j["t0"].is_number())
        throw InputError("moments: t0 is required");
    MomentVector m;
    m.t0 = j["t0"].get<double>();
    if (j.contains("t"))
        m.t = complex_list(j["t"], "moments.t");
    return m;
}

json to_json(const PolynomialCurve& c)
{
    return {{"r", c.r()}, {"a", complex_list_to_json(c.a())}};
}

PolynomialCurve curve_from_json(const json& j)
{
    only_keys(j, {"r", "a"}, "curve");
    if (!j.contains("r") || !j["r"].is_number())
        throw InputError("curve: r is required");
    return PolynomialCurve(j["r"].get<double>(), j.contains("a") ? complex_list(j["a"], "curve.a") : std::vector<cplx>{});
}

json to_json(const SolveReport& r)
{
    return {{"iterations", r.iterations},
            {"residual", r.residual},
            {"cusp_margin", r.cusp_margin},
            {"encloses_origin", r.encloses_origin},
            {"shift", complex_to_json(r.shift)}};
}

json to_json(const DomainSpec& d)
{
    if (d.kind == DomainSpec::Kind::disk)
        return {{"kind", "disk"}, {"center", complex_to_json(d.center)}, {"radius", d.radius}};
    return {{"kind", "polygon"}, {"vertices", complex_list_to_json(d.vertices)}};
}

json to_json(const VerifyReport& r)
{
    auto num = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
    return {{"pass", r.pass},
            {"interior_pass", r.interior_pass},
            {"exterior_pass", r.exterior_pass},
            {"curve_inside_domain", r.curve_inside_domain},
            {"max_interior_abs", num(r.max_interior_abs)},
            {"interior_mean", num(r.interior_mean)},
            {"min_exterior", num(r.min_exterior)},
            {"max_quadrature_error", num(r.max_quadrature_error)},
            {"min_potential_ratio", num(r.min_potential_ratio)},
            {"interior_nodes", r.interior_nodes},
            {"exterior_nodes", r.exterior_nodes},
            {"boundary_nodes", r.boundary_nodes},
            {"excluded_nodes", r.excluded_nodes}};
}

json to_json(const ChainStats& s)
{
    return {{"proposals", s.proposals},
            {"accepted", s.accepted},
            {"rejected_outside", s.rejected_outside},
            {"rejected_coincident", s.rejected_coincident},
            {"acceptance_rate", s.acceptance_rate()},
            {"max_resync_error", s.max_resync_error}};
}

std::string format_double(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_text(const std::filesystem::path& p, const std::string& text)
{
    auto f = open_out(p);
    f << text;
}

void write_json(const std::filesystem::path& p, const json& j)
{
    write_text(p, j.dump(2) + "\n");
}

json read_json(const std::filesystem::path& p)
{
    std::ifstream f(p);
    if (!f)
        throw InputError("cannot read " + p.string());
    try {
        return json::parse(f);
    } catch (const json::parse_error& e) {
        throw InputError(p.string() + ": " + e.what());
    }
}

void write_field_csv(const std::filesystem::path& p, const FieldGrid& g)
{
    auto f = open_out(p);
    f << "x,y,E,class\n";
    for (int iy = 0; iy < g.ny; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
            const std::size_t i = static_cast<std::size_t>(iy) * static_cast<std::size_t>(g.nx) + static_cast<std::size_t>(ix);
            const cplx z = g.node(ix, iy);
            f << format_double(z.real()) << ',' << format_double(z.imag()) << ',' << format_double(g.values[i]) << ','
              << to_string(g.classes[i]) << '\n';
        }
    }
}

void write_samples_csv(const std::filesystem::path& p, const SampleSet& s)
{
    auto f = open_out(p);
    f << "chain,sweep,particle,re,im\n";
    for (int ch = 0; ch < s.chains; ++ch) {
        for (std::size_t fr = 0; fr < s.frames(); ++fr) {
            const cplx* z = s.frame(ch, fr);
            const std::string prefix = std::to_string(ch) + ',' + std::to_string(s.sweeps[fr]) + ',';
            for (int i = 0; i < s.N; ++i)
                f << prefix << i << ',' << format_double(z[i].real()) << ',' << format_double(z[i].imag()) << '\n';
        }
    }
}

SampleSet read_samples_csv(const std::filesystem::path& p, double t0)
{
    std::ifstream f(p);
    if (!f)
        throw InputError("cannot read " + p.string());
    std::string line;
    if (!std::getline(f, line) || line != "chain,sweep,particle,re,im")
        throw InputError(p.string() + ": missing header");

    struct Row {
        long chain, sweep, particle;
        double re, im;
    };
    std::vector<Row> rows;
    std::size_t lineno = 1;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty())
            continue;
        Row r{};
        const char* s = line.c_str();
        char* end = nullptr;
        auto bad = [&] { return InputError(p.string() + ":" + std::to_string(lineno) + ": malformed row"); };
        r.chain = std::strtol(s, &end, 10);
        if (end == s || *end != ',') throw bad();
        s = end + 1;
        r.sweep = std::strtol(s, &end, 10);
        if (end == s || *end != ',') throw bad();
        s = end + 1;
        r.particle = std::strtol(s, &end, 10);
        if (end == s || *end != ',') throw bad();
        s = end + 1;
        r.re = std::strtod(s, &end);
        if (end == s || *end != ',') throw bad();
        s = end + 1;
        r.im = std::strtod(s, &end);
        if (end == s || *end != '\0' || !std::isfinite(r.re) || !std::isfinite(r.im)) throw bad();
        rows.push_back(r);
    }
    if (rows.empty())
        throw InputError(p.string() + ": no samples");

    SampleSet out;
    out.t0 = t0;
    long n = 0;
    while (static_cast<std::size_t>(n) < rows.size() && rows[static_cast<std::size_t>(n)].chain == 0 &&
           rows[static_cast<std::size_t>(n)].sweep == rows[0].sweep)
        ++n;
    std::size_t frames = 0;
    for (const auto& r : rows) {
        if (r.chain != 0)
            break;
        if (r.particle == 0)
            ++frames;
    }
    if (n < 1 || frames < 1 || rows.size() % (static_cast<std::size_t>(n) * frames) != 0)
        throw InputError(p.string() + ": sample table is not rectangular");
    const std::size_t chains = rows.size() / (static_cast<std::size_t>(n) * frames);
    out.N = static_cast<int>(n);
    out.chains = static_cast<int>(chains);
    out.positions.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const std::size_t ch = i / (static_cast<std::size_t>(n) * frames);
        const std::size_t fr = (i / static_cast<std::size_t>(n)) % frames;
        const std::size_t k = i % static_cast<std::size_t>(n);
        if (ch == 0 && k == 0)
            out.sweeps.push_back(r.sweep);
        if (r.chain != static_cast<long>(ch) || r.particle != static_cast<long>(k) || r.sweep != out.sweeps[fr])
            throw InputError(p.string() + ": sample table is not rectangular");
        out.positions.emplace_back(r.re, r.im);
    }
    out.stats.resize(chains);
    return out;
}

void write_density_csv(const std::filesystem::path& p, const DensityEstimate& d)
{
    auto f = open_out(p);
    f << "x,y,density\n";
    for (int iy = 0; iy < d.ny; ++iy) {
        for (int ix = 0; ix < d.nx; ++ix) {
            const cplx z = d.cell_center(ix, iy);
            f << format_double(z.real()) << ',' << format_double(z.imag()) << ','
              << format_double(d.density[static_cast<std::size_t>(iy) * static_cast<std::size_t>(d.nx) + static_cast<std::size_t>(ix)])
              << '\n';
        }
    }
}

} // namespace nmm::io
