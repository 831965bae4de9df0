#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "maxinc/changepoint.hpp"
#include "maxinc/heavytail.hpp"
#include "maxinc/limits.hpp"
#include "maxinc/montecarlo.hpp"
#include "maxinc/scaling.hpp"

namespace maxinc {

using json = nlohmann::json;

// Malformed or inconsistent configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

json to_json(const HeavyTailLaw& law);
HeavyTailLaw law_from_json(const json& j);

json to_json(const ScalingFunction& f);
ScalingFunction scaling_from_json(const json& j);

json to_json(const LimitLaw& law);
// A holder_functional reference is simulated from {gamma, grid, draws}
// with stream `seed`.
LimitLaw limit_from_json(const json& j, std::uint64_t seed, unsigned workers = 1);
// Reference used when a config names none: Phi_alpha, or Phi_alpha^{q/p} for
// m_lower, or the range convolution for range.
LimitLaw default_reference(const HeavyTailLaw& law, Observable mode);

// Reads the fields shared by the simulate and convergence configs. `n` may
// be absent when `require_n` is false.
ExperimentConfig experiment_from_json(const json& j, bool require_n = true);

json to_json(const McSummary& s);
json to_json(const DetectionReport& r);
json to_json(const DominanceSummary& s);
json to_json(const BoundaryReport& r);
json to_json(const JointReport& r);

// Parses a JSON file; errors become ConfigError.
json read_json_file(const std::filesystem::path& path);

// Numeric CSV with one header row.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

CsvTable read_csv(const std::filesystem::path& path);
// Column `name`, or the first column when `name` is empty.
std::vector<double> read_csv_column(const std::filesystem::path& path, const std::string& name = "");
std::string format_csv(const CsvTable& table);

// Writes to a sibling temporary file, then renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
void write_csv(const std::filesystem::path& path, const CsvTable& table);
void write_json(const std::filesystem::path& path, const json& j);

// CSV text of a double with 17 significant digits.
std::string format_double(double v);

}  // namespace maxinc
