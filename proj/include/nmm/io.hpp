#pragma once

// JSON and CSV serialization of curves, reports and sample sets.

#include "nmm/analysis.hpp"
#include "nmm/curve.hpp"
#include "nmm/domain.hpp"
#include "nmm/energy.hpp"
#include "nmm/gas_sampler.hpp"
#include "nmm/moment_inverse.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace nmm::io {

using json = nlohmann::ordered_json;

/// Thrown on malformed input files or config values.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Complex numbers are [re, im]; a bare number is accepted on input.
json complex_to_json(cplx z);
cplx complex_from_json(const json& j, const std::string& what);

json to_json(const MomentVector& m);
MomentVector moments_from_json(const json& j);
json to_json(const PolynomialCurve& c);
PolynomialCurve curve_from_json(const json& j);
json to_json(const SolveReport& r);
json to_json(const DomainSpec& d);
json to_json(const VerifyReport& r);
json to_json(const ChainStats& s);

/// %.17g, "nan" / "inf" for non-finite values.
std::string format_double(double x);

void write_text(const std::filesystem::path& p, const std::string& text);
void write_json(const std::filesystem::path& p, const json& j);
json read_json(const std::filesystem::path& p);

/// x, y, E, class (row-major, y outer).
void write_field_csv(const std::filesystem::path& p, const FieldGrid& g);
/// chain, sweep, particle, re, im
void write_samples_csv(const std::filesystem::path& p, const SampleSet& s);
/// Rebuilds positions and the recorded sweeps; N, chains are inferred. Throws
/// InputError on anything but a complete rectangular table.
SampleSet read_samples_csv(const std::filesystem::path& p, double t0);
/// x, y, density at cell centres.
void write_density_csv(const std::filesystem::path& p, const DensityEstimate& d);

} // namespace nmm::io
