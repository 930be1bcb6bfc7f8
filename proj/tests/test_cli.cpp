#include <doctest.h>

#include "nmm/cli.hpp"

#include <fstream>
#include <sstream>

using namespace nmm;
namespace fs = std::filesystem;
using io::json;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("nmmlab_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

fs::path write_config(const fs::path& dir, const json& j)
{
    const fs::path p = dir / "input.json";
    std::ofstream(p) << j.dump(2);
    return p;
}

int run_cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "nmmlab");
    std::vector<char*> argv;
    for (auto& a : args)
        argv.push_back(a.data());
    return cli::main(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::size_t data_rows(const fs::path& p)
{
    std::ifstream f(p);
    std::string line;
    std::size_t n = 0;
    std::getline(f, line);
    while (std::getline(f, line))
        if (!line.empty())
            ++n;
    return n;
}

json ellipse_config()
{
    return json::parse(R"({
      "schema_version": 1,
      "potential": { "t0": 0.04, "t": [[0, 0], [0.25, 0]] },
      "domain": { "kind": "disk", "center": [0, 0], "radius": 1.0 },
      "energy_map": { "nx": 10, "ny": 10 },
      "sampler": { "N": 16, "sweeps": 3000, "burn_in": 500, "chains": 8, "thinning": 5, "seed": 7 },
      "analysis": { "bins": 10, "kmax": 4 }
    })");
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("config parsing and round trip")
{
    auto c = cli::parse_config(ellipse_config());
    CHECK(c.potential.t0 == 0.04);
    CHECK(c.sampler.N == 16);
    CHECK(c.domain);
    const auto again = cli::parse_config(cli::to_json(c));
    CHECK(cli::to_json(again) == cli::to_json(c));

    json auto_dom = ellipse_config();
    auto_dom.erase("domain");
    const auto a = cli::parse_config(auto_dom);
    CHECK_FALSE(a.domain);
    CHECK(cli::to_json(cli::parse_config(cli::to_json(a))) == cli::to_json(a));

    auto bad = ellipse_config();
    bad["sampler"]["sweepz"] = 3;
    CHECK_THROWS_AS(cli::parse_config(bad), io::InputError);
    bad = ellipse_config();
    bad["extra"] = 1;
    CHECK_THROWS_AS(cli::parse_config(bad), io::InputError);
    bad = ellipse_config();
    bad["schema_version"] = 2;
    CHECK_THROWS_AS(cli::parse_config(bad), io::InputError);
    bad = ellipse_config();
    bad.erase("schema_version");
    CHECK_THROWS_AS(cli::parse_config(bad), io::InputError);
    bad = ellipse_config();
    bad["potential"]["t0"] = -1.0;
    CHECK_THROWS_AS(cli::parse_config(bad), io::InputError);
    bad = ellipse_config();
    bad["sampler"]["seed"] = -4;
    CHECK_THROWS_AS(cli::parse_config(bad), io::InputError);
    bad = ellipse_config();
    bad["sampler"]["N"] = 1.5;
    CHECK_THROWS_AS(cli::parse_config(bad), io::InputError);

    bad = ellipse_config();
    bad["potential"]["t"][1] = json::array({0.6, 0.0});
    try {
        cli::parse_config(bad);
        FAIL("accepted |t2| >= 1/2");
    } catch (const io::InputError& e) {
        CHECK(std::string(e.what()).find("requires |t2| < 1/2") != std::string::npos);
    }
}

TEST_CASE("solve-curve")
{
    const auto dir = scratch("solve");
    const auto cfg = write_config(dir, ellipse_config());
    CHECK(run_cli({"solve-curve", "--config", cfg.string(), "--out", (dir / "out").string()}) == 0);
    const auto curve = io::curve_from_json(io::read_json(dir / "out" / "curve.json"));
    CHECK(std::abs(curve.r() - 0.2309401076758503) < 1e-9);
    const auto report = io::read_json(dir / "out" / "solve_report.json");
    CHECK(report["iterations"].is_array());
    CHECK(report["residual"].get<double>() < 1e-12);
    CHECK(report["cusp_margin"].get<double>() > 0.0);
    // The resolved config reproduces the run.
    const auto resolved = io::read_json(dir / "out" / "config.json");
    CHECK(cli::to_json(cli::parse_config(resolved)) == resolved);

    auto bad = ellipse_config();
    bad["potential"]["t"][1] = json::array({0.6, 0.0});
    CHECK(run_cli({"solve-curve", "--config", write_config(dir, bad).string(), "--out", (dir / "bad").string()}) == 1);
    CHECK_FALSE(fs::exists(dir / "bad"));

    auto cusp = json::parse(R"({"schema_version": 1, "potential": {"t0": 2.0, "t": [0, 0, 0.1]}})");
    CHECK(run_cli({"solve-curve", "--config", write_config(dir, cusp).string(), "--out", (dir / "cusp").string()}) == 2);

    CHECK(run_cli({"solve-curve", "--config", (dir / "missing.json").string(), "--out", (dir / "x").string()}) == 1);
    CHECK(run_cli({"solve-curve"}) == 1);
}

TEST_CASE("energy-map")
{
    const auto dir = scratch("energy");
    const auto cfg = write_config(dir, ellipse_config());
    CHECK(run_cli({"energy-map", "--config", cfg.string(), "--out", (dir / "out").string()}) == 0);
    CHECK(data_rows(dir / "out" / "field.csv") == 100);
    const auto v = io::read_json(dir / "out" / "verify.json");
    CHECK(v["pass"].get<bool>());
    CHECK(v["max_interior_abs"].get<double>() <= 1e-6);
}

TEST_CASE("sample")
{
    const auto dir = scratch("sample");
    auto j = ellipse_config();
    j["sampler"] = {{"N", 1}, {"sweeps", 300}, {"burn_in", 100}, {"chains", 1}, {"seed", 3}};
    const auto cfg = write_config(dir, j);
    CHECK(run_cli({"sample", "--config", cfg.string(), "--out", (dir / "a").string()}) == 0);
    CHECK(data_rows(dir / "a" / "samples.csv") == 200);
    CHECK(run_cli({"sample", "--config", cfg.string(), "--out", (dir / "b").string(), "--threads", "3"}) == 0);
    CHECK(slurp(dir / "a" / "samples.csv") == slurp(dir / "b" / "samples.csv"));
    CHECK(slurp(dir / "a" / "samples.json") == slurp(dir / "b" / "samples.json"));
    CHECK(run_cli({"sample", "--config", cfg.string(), "--out", (dir / "c").string(), "--seed", "4"}) == 0);
    CHECK(slurp(dir / "a" / "samples.csv") != slurp(dir / "c" / "samples.csv"));
    CHECK(io::read_json(dir / "c" / "config.json")["sampler"]["seed"] == 4);
}

TEST_CASE("analyze")
{
    const auto dir = scratch("analyze");
    auto circle = json::parse(R"({
      "schema_version": 1,
      "potential": { "t0": 0.04 },
      "domain": { "kind": "disk", "radius": 1.0 },
      "sampler": { "N": 32, "sweeps": 2500, "burn_in": 500, "chains": 8, "thinning": 5, "seed": 11 },
      "analysis": { "bins": 20, "kmax": 4 }
    })");
    const auto cfg = write_config(dir, circle);
    REQUIRE(run_cli({"sample", "--config", cfg.string(), "--out", (dir / "s").string()}) == 0);
    CHECK(run_cli({"analyze", "--config", cfg.string(), "--samples", (dir / "s").string(), "--out",
                   (dir / "a").string()}) == 0);
    const auto m = io::read_json(dir / "a" / "moments.json");
    CHECK(m["moments"][0]["mean"][0].get<double>() == 0.04);
    for (int k = 1; k <= 4; ++k)
        CHECK(m["moments"][k]["within_tolerance"].get<bool>());
    CHECK(data_rows(dir / "a" / "density.csv") == 400);
    CHECK(io::read_json(dir / "a" / "weak_convergence.json")["entries"].size() == 14);

    // Read-back of the sample table is exact.
    const auto s = io::read_samples_csv(dir / "s" / "samples.csv", 0.04);
    CHECK(s.N == 32);
    CHECK(s.chains == 8);
    CHECK(s.frames() == 400);

    CHECK(run_cli({"analyze", "--config", cfg.string(), "--samples", (dir / "nope").string(), "--out",
                   (dir / "b").string()}) == 1);
    std::ofstream(dir / "corrupt.csv") << "chain,sweep,particle,re,im\n0,1,0,0.1,x\n";
    CHECK(run_cli({"analyze", "--config", cfg.string(), "--samples", (dir / "corrupt.csv").string(), "--out",
                   (dir / "c").string()}) == 1);
    std::ofstream(dir / "ragged.csv") << "chain,sweep,particle,re,im\n0,1,0,0.1,0\n0,1,1,0.1,0\n0,2,0,0.1,0\n";
    CHECK(run_cli({"analyze", "--config", cfg.string(), "--samples", (dir / "ragged.csv").string(), "--out",
                   (dir / "d").string()}) == 1);
}

TEST_CASE("analyze: ellipse second moment")
{
    const auto dir = scratch("analyze_ellipse");
    auto j = ellipse_config();
    j["sampler"] = {{"N", 32}, {"sweeps", 2500}, {"burn_in", 500}, {"chains", 8}, {"thinning", 5}, {"seed", 5}};
    const auto cfg = write_config(dir, j);
    REQUIRE(run_cli({"sample", "--config", cfg.string(), "--out", (dir / "s").string()}) == 0);
    REQUIRE(run_cli({"analyze", "--config", cfg.string(), "--samples", (dir / "s").string(), "--out",
                     (dir / "a").string()}) == 0);
    const auto m = io::read_json(dir / "a" / "moments.json")["moments"][2];
    CHECK(std::abs(m["predicted"][0].get<double>() - 0.04 * 0.04 * (2.0 / 3.0)) < 1e-12);
    CHECK(m["within_tolerance"].get<bool>());
}

TEST_CASE("pipeline")
{
    const auto dir = scratch("pipeline");
    const auto cfg = write_config(dir, ellipse_config());
    CHECK(run_cli({"pipeline", "--config", cfg.string(), "--out", (dir / "a").string(), "--threads", "1"}) == 0);
    CHECK(io::read_json(dir / "a" / "summary.json")["pass"].get<bool>());
    CHECK(run_cli({"pipeline", "--config", cfg.string(), "--out", (dir / "b").string(), "--threads", "4"}) == 0);
    for (const char* f : {"config.json", "curve.json", "solve_report.json", "field.csv", "verify.json", "samples.csv",
                          "samples.json", "density.csv", "moments.json", "support.json", "weak_convergence.json",
                          "summary.json"})
        CHECK_MESSAGE(slurp(dir / "a" / f) == slurp(dir / "b" / f), f);

    auto bad = ellipse_config();
    bad["sampler"]["chains"] = 0;
    CHECK(run_cli({"pipeline", "--config", write_config(dir, bad).string(), "--out", (dir / "bad").string()}) == 1);
    CHECK_FALSE(fs::exists(dir / "bad"));

    auto cusp = json::parse(R"({"schema_version": 1, "potential": {"t0": 2.0, "t": [0, 0, 0.1]}})");
    CHECK(run_cli({"pipeline", "--config", write_config(dir, cusp).string(), "--out", (dir / "cusp").string()}) == 2);
    const auto s = io::read_json(dir / "cusp" / "summary.json");
    CHECK(s["failed_stage"] == "solve");
    CHECK_FALSE(fs::exists(dir / "cusp" / "field.csv"));
}

}
