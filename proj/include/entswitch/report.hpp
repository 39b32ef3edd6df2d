#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "entswitch/analytic.hpp"
#include "entswitch/simulate.hpp"
#include "entswitch/solve.hpp"

namespace entswitch::report {

using Json = nlohmann::json;

enum class Format { Text, Json, Csv };
// Throws ConfigInvalid for anything but text, json or csv.
Format parse_format(std::string_view name);

// 17 significant digits, for machine-readable output.
std::string fmt_exact(double v);
// 12 significant digits, for people.
std::string fmt_text(double v);

struct RunManifest {
  std::string subcommand;
  std::map<std::string, std::string> parameters;
  std::optional<std::uint64_t> seed;
  std::string version;
  std::string timestamp;  // UTC, ISO 8601
  std::vector<std::string> outputs;
};

// Stamps the library version and the current time.
RunManifest make_manifest(std::string subcommand, std::map<std::string, std::string> parameters,
                          std::optional<std::uint64_t> seed = std::nullopt);
std::string_view version();

Json to_json(const RunManifest& m);
RunManifest manifest_from_json(const Json& j);

struct AnalyticRecord {
  int k = 0;
  int n = 0;
  double mu = 1.0;
  double q = 1.0;
  analytic::AnalyticReport report;
};
Json to_json(const AnalyticRecord& r);
AnalyticRecord analytic_from_json(const Json& j);

struct SimulateRecord {
  int k = 0;
  int n = 0;
  double mu = 1.0;
  double q = 1.0;
  std::int64_t steps = 0;
  std::uint64_t seed = 0;
  simulate::SimReport report;
};
Json to_json(const SimulateRecord& r);
SimulateRecord simulate_from_json(const Json& j);
std::string simulate_csv_header();
std::string to_csv_row(const SimulateRecord& r);

struct SolveRecord {
  int k = 0;
  int n = 0;
  int B = 0;
  double pi_R0 = 0.0;
  double expected_qubits = 0.0;
  double A = 0.0;
  double B_aggr = 0.0;
  double residual = 0.0;
  double boundary_mass = 0.0;
};
SolveRecord solve_record(const SwitchParams& params, const solve::StationaryResult& r);
SolveRecord solve_record(const SwitchParams& params, const solve::SweepRow& row);
Json to_json(const SolveRecord& r);
SolveRecord solve_from_json(const Json& j);
std::string solve_csv_header();
std::string to_csv_row(const SolveRecord& r);

std::string sweep_csv_header();
std::string to_csv_row(const analytic::HeatmapCell& c);

// Parse CSV text (header line plus rows) back into records. Throws
// ConfigInvalid on a header mismatch or malformed field.
std::vector<SimulateRecord> parse_simulate_csv(std::string_view text);
std::vector<SolveRecord> parse_solve_csv(std::string_view text);
std::vector<analytic::HeatmapCell> parse_sweep_csv(std::string_view text);

}  // namespace entswitch::report
