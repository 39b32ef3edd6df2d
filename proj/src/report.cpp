#include "entswitch/report.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <sstream>

#include "entswitch/error.hpp"

namespace entswitch::report {

Format parse_format(std::string_view name) {
  if (name == "text") return Format::Text;
  if (name == "json") return Format::Json;
  if (name == "csv") return Format::Csv;
  fail(ErrorKind::ConfigInvalid, "unknown format '" + std::string(name) + "' (expected text, json or csv)");
}

namespace {

std::string fmt_digits(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json estimate_json(const simulate::Estimate& e) { return Json{{"value", e.value}, {"halfwidth", e.halfwidth}}; }

simulate::Estimate estimate_from(const Json& j) {
  return {j.at("value").get<double>(), j.at("halfwidth").get<double>()};
}

std::string join(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += fields[i];
  }
  return out;
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.emplace_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) out.push_back(line);
    start = end + 1;
  }
  return out;
}

double to_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) fail(ErrorKind::ConfigInvalid, "malformed number '" + s + "'");
  return v;
}

template <class Int>
Int to_int(const std::string& s) {
  Int v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) fail(ErrorKind::ConfigInvalid, "malformed integer '" + s + "'");
  return v;
}

// Checks the header and returns the data rows split into fields.
std::vector<std::vector<std::string>> csv_rows(std::string_view text, const std::string& header) {
  const auto lines = lines_of(text);
  if (lines.empty() || lines.front() != header) fail(ErrorKind::ConfigInvalid, "CSV header does not match: " + header);
  const std::size_t width = split(header).size();
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto f = split(lines[i]);
    if (f.size() != width) fail(ErrorKind::ConfigInvalid, "CSV row has " + std::to_string(f.size()) + " fields");
    rows.push_back(std::move(f));
  }
  return rows;
}

}  // namespace

std::string fmt_exact(double v) { return fmt_digits(v, 17); }
std::string fmt_text(double v) { return fmt_digits(v, 12); }

std::string_view version() { return ENTSWITCH_VERSION; }

RunManifest make_manifest(std::string subcommand, std::map<std::string, std::string> parameters,
                          std::optional<std::uint64_t> seed) {
  return {std::move(subcommand), std::move(parameters), seed, std::string(version()), utc_now(), {}};
}

Json to_json(const RunManifest& m) {
  Json j{{"subcommand", m.subcommand},
         {"parameters", m.parameters},
         {"version", m.version},
         {"timestamp", m.timestamp},
         {"outputs", m.outputs}};
  j["seed"] = m.seed ? Json(*m.seed) : Json(nullptr);
  return j;
}

RunManifest manifest_from_json(const Json& j) {
  RunManifest m;
  m.subcommand = j.at("subcommand").get<std::string>();
  m.parameters = j.at("parameters").get<std::map<std::string, std::string>>();
  if (!j.at("seed").is_null()) m.seed = j.at("seed").get<std::uint64_t>();
  m.version = j.at("version").get<std::string>();
  m.timestamp = j.at("timestamp").get<std::string>();
  m.outputs = j.at("outputs").get<std::vector<std::string>>();
  return m;
}

Json to_json(const AnalyticRecord& r) {
  return Json{{"k", r.k},
              {"n", r.n},
              {"mu", r.mu},
              {"q", r.q},
              {"stable", r.report.stable},
              {"capacity", r.report.capacity},
              {"expected_qubits", r.report.expected_qubits},
              {"pi_R0", r.report.pi_R0},
              {"A", r.report.aggregate_A},
              {"B_aggr", r.report.aggregate_B}};
}

AnalyticRecord analytic_from_json(const Json& j) {
  AnalyticRecord r;
  r.k = j.at("k").get<int>();
  r.n = j.at("n").get<int>();
  r.mu = j.at("mu").get<double>();
  r.q = j.at("q").get<double>();
  r.report.stable = j.at("stable").get<bool>();
  r.report.capacity = j.at("capacity").get<double>();
  r.report.expected_qubits = j.at("expected_qubits").get<double>();
  r.report.pi_R0 = j.at("pi_R0").get<double>();
  r.report.aggregate_A = j.at("A").get<double>();
  r.report.aggregate_B = j.at("B_aggr").get<double>();
  return r;
}

Json to_json(const SimulateRecord& r) {
  const auto& s = r.report;
  return Json{{"k", r.k},
              {"n", r.n},
              {"mu", r.mu},
              {"q", r.q},
              {"steps", r.steps},
              {"seed", r.seed},
              {"capacity", estimate_json(s.capacity)},
              {"capacity_scaled", estimate_json(s.capacity_scaled)},
              {"occupancy", estimate_json(s.occupancy)},
              {"r0_frac", estimate_json(s.r0_fraction)},
              {"attempts", s.attempts},
              {"successes", s.successes},
              {"elapsed_model_time", s.elapsed_model_time}};
}

SimulateRecord simulate_from_json(const Json& j) {
  SimulateRecord r;
  r.k = j.at("k").get<int>();
  r.n = j.at("n").get<int>();
  r.mu = j.at("mu").get<double>();
  r.q = j.at("q").get<double>();
  r.steps = j.at("steps").get<std::int64_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.report.capacity = estimate_from(j.at("capacity"));
  r.report.capacity_scaled = estimate_from(j.at("capacity_scaled"));
  r.report.occupancy = estimate_from(j.at("occupancy"));
  r.report.r0_fraction = estimate_from(j.at("r0_frac"));
  r.report.attempts = j.at("attempts").get<std::int64_t>();
  r.report.successes = j.at("successes").get<std::int64_t>();
  r.report.elapsed_model_time = j.at("elapsed_model_time").get<double>();
  return r;
}

std::string simulate_csv_header() {
  return "k,n,mu,q,steps,seed,capacity,capacity_ci,occupancy,occupancy_ci,r0_frac,r0_ci,attempts,successes";
}

std::string to_csv_row(const SimulateRecord& r) {
  const auto& s = r.report;
  return join({std::to_string(r.k), std::to_string(r.n), fmt_exact(r.mu), fmt_exact(r.q), std::to_string(r.steps),
               std::to_string(r.seed), fmt_exact(s.capacity.value), fmt_exact(s.capacity.halfwidth),
               fmt_exact(s.occupancy.value), fmt_exact(s.occupancy.halfwidth), fmt_exact(s.r0_fraction.value),
               fmt_exact(s.r0_fraction.halfwidth), std::to_string(s.attempts), std::to_string(s.successes)});
}

std::vector<SimulateRecord> parse_simulate_csv(std::string_view text) {
  std::vector<SimulateRecord> out;
  for (const auto& f : csv_rows(text, simulate_csv_header())) {
    SimulateRecord r;
    r.k = to_int<int>(f[0]);
    r.n = to_int<int>(f[1]);
    r.mu = to_double(f[2]);
    r.q = to_double(f[3]);
    r.steps = to_int<std::int64_t>(f[4]);
    r.seed = to_int<std::uint64_t>(f[5]);
    r.report.capacity = {to_double(f[6]), to_double(f[7])};
    r.report.occupancy = {to_double(f[8]), to_double(f[9])};
    r.report.r0_fraction = {to_double(f[10]), to_double(f[11])};
    r.report.attempts = to_int<std::int64_t>(f[12]);
    r.report.successes = to_int<std::int64_t>(f[13]);
    out.push_back(r);
  }
  return out;
}

SolveRecord solve_record(const SwitchParams& params, const solve::StationaryResult& r) {
  return {params.k(), params.n(), r.B_used, r.pi_R0, r.expected_qubits, r.aggregate_A, r.aggregate_B, r.residual,
          r.boundary_mass};
}

SolveRecord solve_record(const SwitchParams& params, const solve::SweepRow& row) {
  return {params.k(), params.n(), row.B, row.pi_R0, row.expected_qubits, row.aggregate_A, row.aggregate_B,
          row.residual, row.boundary_mass};
}

Json to_json(const SolveRecord& r) {
  return Json{{"k", r.k},
              {"n", r.n},
              {"B", r.B},
              {"pi_R0", r.pi_R0},
              {"expected_qubits", r.expected_qubits},
              {"A", r.A},
              {"B_aggr", r.B_aggr},
              {"residual", r.residual},
              {"boundary_mass", r.boundary_mass}};
}

SolveRecord solve_from_json(const Json& j) {
  return {j.at("k").get<int>(),         j.at("n").get<int>(),
          j.at("B").get<int>(),         j.at("pi_R0").get<double>(),
          j.at("expected_qubits").get<double>(), j.at("A").get<double>(),
          j.at("B_aggr").get<double>(), j.at("residual").get<double>(),
          j.at("boundary_mass").get<double>()};
}

std::string solve_csv_header() { return "k,n,B,pi_R0,expected_qubits,A,B_aggr,residual,boundary_mass"; }

std::string to_csv_row(const SolveRecord& r) {
  return join({std::to_string(r.k), std::to_string(r.n), std::to_string(r.B), fmt_exact(r.pi_R0),
               fmt_exact(r.expected_qubits), fmt_exact(r.A), fmt_exact(r.B_aggr), fmt_exact(r.residual),
               fmt_exact(r.boundary_mass)});
}

std::vector<SolveRecord> parse_solve_csv(std::string_view text) {
  std::vector<SolveRecord> out;
  for (const auto& f : csv_rows(text, solve_csv_header())) {
    out.push_back({to_int<int>(f[0]), to_int<int>(f[1]), to_int<int>(f[2]), to_double(f[3]), to_double(f[4]),
                   to_double(f[5]), to_double(f[6]), to_double(f[7]), to_double(f[8])});
  }
  return out;
}

std::string sweep_csv_header() { return "k,n,expected_qubits,log10_expected_qubits"; }

std::string to_csv_row(const analytic::HeatmapCell& c) {
  return join({std::to_string(c.k), std::to_string(c.n), fmt_exact(c.expected_qubits),
               fmt_exact(c.log10_expected_qubits)});
}

std::vector<analytic::HeatmapCell> parse_sweep_csv(std::string_view text) {
  std::vector<analytic::HeatmapCell> out;
  for (const auto& f : csv_rows(text, sweep_csv_header())) {
    out.push_back({to_int<int>(f[0]), to_int<int>(f[1]), to_double(f[2]), to_double(f[3])});
  }
  return out;
}

}  // namespace entswitch::report
