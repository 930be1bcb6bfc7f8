#pragma once

// Batch front end: config parsing and the five subcommands.

#include "nmm/io.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace nmm::cli {

enum ExitCode { ok = 0, input_error = 1, regime_failure = 2, tolerance_failure = 3 };

struct AutoDomain {
    double safety = 0.95;
    double cap_factor = 5.0;
};

struct EnergyMapOptions {
    int nx = 200, ny = 200;
    double interior_tol = 1e-6;
    double exterior_tol = 1e-6;
    double band_rel = 1e-9;
    QuadratureOptions quadrature{};
};

struct AnalysisOptions {
    int bins = 50;
    /// Unset: 1 + 2 / sqrt(N).
    std::optional<double> dilation;
    int kmax = 4;
    /// Moments 1..check_kmax enter the pass decision; higher ones are reported only.
    int check_kmax = 3;
    double min_expected = 50.0;
    double min_support_fraction = 0.95;
    double density_rel_tol = 0.10;
    double moment_sigmas = 3.0;
};

struct RunConfig {
    static constexpr int schema_version = 1;
    MomentVector potential;
    /// Unset: default_domain about the minimum of the potential.
    std::optional<DomainSpec> domain;
    AutoDomain auto_domain;
    bool recenter = false;
    SolverConfig solver;
    EnergyMapOptions energy_map;
    SamplerConfig sampler;
    AnalysisOptions analysis;
    std::optional<std::string> output;
};

/// Throws io::InputError on unknown fields, wrong types or invalid values.
RunConfig parse_config(const io::json& j);
/// Fully resolved; parse_config(to_json(c)) reproduces c.
io::json to_json(const RunConfig& c);

struct Context {
    RunConfig config;
    std::filesystem::path out;
    unsigned threads = 1;
};

int cmd_solve_curve(const Context& ctx);
int cmd_energy_map(const Context& ctx);
int cmd_sample(const Context& ctx);
int cmd_analyze(const Context& ctx, const std::filesystem::path& samples);
int cmd_pipeline(const Context& ctx);

/// Entry point of the nmmlab executable; returns the process exit code.
int main(int argc, char** argv);

} // namespace nmm::cli
