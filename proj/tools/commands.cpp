#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include "entswitch/analytic.hpp"
#include "entswitch/identities.hpp"
#include "entswitch/lyapunov.hpp"
#include "entswitch/report.hpp"
#include "entswitch/simulate.hpp"
#include "entswitch/solve.hpp"

namespace entswitch::cli {

using report::Format;
using report::Json;
using report::fmt_exact;
using report::fmt_text;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::CertificationFailed:
    case ErrorKind::TailBoundViolated:
    case ErrorKind::NoConvergence:
    case ErrorKind::DivergentRegime:
      return kExitTolerance;
    default:
      return kExitRejected;
  }
}

namespace {

struct Common {
  int k = 5;
  int n = 3;
  double mu = 1.0;
  double q = 1.0;
  std::string format;
  std::string out_path;
};

void add_params(CLI::App* sub, Common& c) {
  sub->add_option("--k", c.k, "number of links");
  sub->add_option("--n", c.n, "parties per delivered state");
  sub->add_option("--mu", c.mu, "per-link generation rate");
  sub->add_option("--q", c.q, "swap success probability");
}

void add_output(CLI::App* sub, Common& c, const std::string& default_format) {
  c.format = default_format;
  sub->add_option("--format", c.format, "text, json or csv")->check(CLI::IsMember({"text", "json", "csv"}));
  sub->add_option("--out", c.out_path, "write output here (plus a .manifest.json) instead of stdout");
}

std::string joined(const std::vector<std::string>& parts) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + parts[i];
  return s;
}

std::map<std::string, std::string> resolved_parameters(const CLI::App* sub) {
  static const char* skip[] = {"help", "config", "format", "out"};
  std::map<std::string, std::string> params;
  for (const CLI::Option* o : sub->get_options()) {
    const std::string name = o->get_single_name();
    if (std::find(std::begin(skip), std::end(skip), name) != std::end(skip)) continue;
    params[name] = o->count() > 0 ? joined(o->results()) : o->get_default_str();
  }
  return params;
}

class Output {
 public:
  Output(std::ostream& out, const Common& c) : out_(out), common_(c), format_(report::parse_format(c.format)) {}

  Format format() const { return format_; }

  // JSON payloads get the manifest embedded under "manifest".
  void emit(report::RunManifest manifest, const std::string& text, Json json, const std::string& csv) {
    if (!common_.out_path.empty()) manifest.outputs.push_back(common_.out_path);
    std::string body;
    switch (format_) {
      case Format::Text:
        body = text;
        break;
      case Format::Csv:
        body = csv;
        break;
      case Format::Json:
        json["manifest"] = report::to_json(manifest);
        body = json.dump(2) + "\n";
        break;
    }
    if (common_.out_path.empty()) {
      out_ << body;
      return;
    }
    write_file(common_.out_path, body);
    write_manifest(common_.out_path, manifest);
    out_ << "wrote " << common_.out_path << "\n";
  }

  static void write_file(const std::string& path, const std::string& body) {
    std::ofstream f(path);
    if (!f) fail(ErrorKind::ConfigInvalid, "cannot open " + path + " for writing");
    f << body;
  }

  static void write_manifest(const std::string& path, const report::RunManifest& m) {
    write_file(path + ".manifest.json", report::to_json(m).dump(2) + "\n");
  }

 private:
  std::ostream& out_;
  const Common& common_;
  Format format_;
};

std::string pm(const simulate::Estimate& e) { return fmt_text(e.value) + " +/- " + fmt_text(e.halfwidth); }

// ---- analytic ----

struct AnalyticCmd {
  Common c;
  CLI::App* sub = nullptr;

  void attach(CLI::App& app) {
    sub = app.add_subcommand("analytic", "closed-form capacity, occupancy and R0 mass");
    add_params(sub, c);
    add_output(sub, c, "text");
  }

  void run(std::ostream& out) {
    Output o(out, c);
    const SwitchParams p(c.k, c.n, c.mu, c.q);
    const report::AnalyticRecord rec{c.k, c.n, c.mu, c.q, analytic::analyze(p)};
    const auto& r = rec.report;
    std::ostringstream text;
    text << "k " << c.k << "\nn " << c.n << "\nmu " << fmt_text(c.mu) << "\nq " << fmt_text(c.q) << "\ncapacity "
         << fmt_text(r.capacity) << "\nexpected_qubits " << fmt_text(r.expected_qubits) << "\npi_R0 "
         << fmt_text(r.pi_R0) << "\nA " << fmt_text(r.aggregate_A) << "\nB_aggr " << fmt_text(r.aggregate_B) << "\n";
    const std::string csv = "k,n,mu,q,capacity,expected_qubits,pi_R0,A,B_aggr\n" + std::to_string(c.k) + "," +
                            std::to_string(c.n) + "," + fmt_exact(c.mu) + "," + fmt_exact(c.q) + "," +
                            fmt_exact(r.capacity) + "," + fmt_exact(r.expected_qubits) + "," + fmt_exact(r.pi_R0) +
                            "," + fmt_exact(r.aggregate_A) + "," + fmt_exact(r.aggregate_B) + "\n";
    o.emit(report::make_manifest("analytic", resolved_parameters(sub)), text.str(), report::to_json(rec), csv);
  }
};

// ---- simulate ----

struct SimulateCmd {
  Common c;
  CLI::App* sub = nullptr;
  std::int64_t steps = 1'000'000;
  std::int64_t warmup = -1;
  std::uint64_t seed = 1;
  int replications = 1;
  int batches = 50;
  bool embedded = false;
  bool probe = false;
  std::vector<std::int64_t> horizons{10'000, 1'000'000};
  CLI::Option* reps_opt = nullptr;

  void attach(CLI::App& app) {
    sub = app.add_subcommand("simulate", "Monte Carlo run of the uniformized chain");
    add_params(sub, c);
    sub->add_option("--steps", steps, "chain steps per replication")->check(CLI::PositiveNumber);
    sub->add_option("--warmup", warmup, "discarded steps (default 5% of steps)");
    sub->add_option("--seed", seed, "RNG seed")->envname("ENTSWITCH_SEED");
    reps_opt = sub->add_option("--replications", replications, "independent replications (probe default 200)");
    sub->add_option("--batches", batches, "batches for batch-means intervals");
    auto* emb = sub->add_flag("--embedded", embedded, "observe the chain at visits to S");
    auto* prb = sub->add_flag("--probe", probe, "growth of |X_T| at k = n over --horizons");
    emb->excludes(prb);
    sub->add_option("--horizons", horizons, "probe horizons")->delimiter(',');
    add_output(sub, c, "text");
  }

  simulate::SimConfig config() const {
    simulate::SimConfig cfg = simulate::SimConfig::with_steps(steps, seed);
    if (warmup >= 0) cfg.warmup = warmup;
    cfg.replications = replications;
    cfg.batches = batches;
    cfg.validate();
    return cfg;
  }

  void run(std::ostream& out) {
    const SwitchParams p(c.k, c.n, c.mu, c.q);
    Output o(out, c);
    if (probe) return run_probe(p, o);
    if (embedded) return run_embedded(p, o);
    const report::SimulateRecord rec{c.k, c.n, c.mu, c.q, steps, seed, simulate::run(p, config())};
    const auto& r = rec.report;
    std::ostringstream text;
    text << "capacity " << pm(r.capacity) << "\ncapacity_scaled " << pm(r.capacity_scaled) << "\noccupancy "
         << pm(r.occupancy) << "\nr0_frac " << pm(r.r0_fraction) << "\nattempts " << r.attempts << "\nsuccesses "
         << r.successes << "\nelapsed_model_time " << fmt_text(r.elapsed_model_time) << "\n";
    o.emit(report::make_manifest("simulate", resolved_parameters(sub), seed), text.str(), report::to_json(rec),
           report::simulate_csv_header() + "\n" + report::to_csv_row(rec) + "\n");
  }

  void run_embedded(const SwitchParams& p, Output& o) {
    const auto r = simulate::run_embedded(p, config());
    std::ostringstream text;
    std::string csv = "j,excursion_mean,psi_j,count\n";
    Json rows = Json::array();
    text << "mean_Y " << pm(r.mean_Y) << "\nvisits " << r.visits << "\nj excursion_mean psi_j count\n";
    for (int j = 1; j < p.n(); ++j) {
      const double psi = analytic::psi_j(p.k(), p.n(), j);
      text << j << " " << fmt_text(r.excursion_mean[j]) << " " << fmt_text(psi) << " " << r.excursion_count[j] << "\n";
      csv += std::to_string(j) + "," + fmt_exact(r.excursion_mean[j]) + "," + fmt_exact(psi) + "," +
             std::to_string(r.excursion_count[j]) + "\n";
      rows.push_back({{"j", j}, {"excursion_mean", r.excursion_mean[j]}, {"psi_j", psi},
                      {"count", r.excursion_count[j]}});
    }
    Json j{{"k", p.k()},
           {"n", p.n()},
           {"mean_Y", {{"value", r.mean_Y.value}, {"halfwidth", r.mean_Y.halfwidth}}},
           {"visits", r.visits},
           {"excursions", rows}};
    o.emit(report::make_manifest("simulate", resolved_parameters(sub), seed), text.str(), j, csv);
  }

  void run_probe(const SwitchParams& p, Output& o) {
    const int reps = reps_opt->count() > 0 ? replications : 200;
    const auto table = simulate::instability_probe(p, horizons, reps, seed);
    std::ostringstream text;
    std::string csv = "horizon,median_total,mean_total,mean_ci\n";
    Json rows = Json::array();
    text << "horizon median_total mean_total\n";
    for (const auto& row : table) {
      text << row.horizon << " " << fmt_text(row.median_total) << " " << pm(row.mean_total) << "\n";
      csv += std::to_string(row.horizon) + "," + fmt_exact(row.median_total) + "," + fmt_exact(row.mean_total.value) +
             "," + fmt_exact(row.mean_total.halfwidth) + "\n";
      rows.push_back({{"horizon", row.horizon},
                      {"median_total", row.median_total},
                      {"mean_total", row.mean_total.value},
                      {"mean_ci", row.mean_total.halfwidth}});
    }
    Json j{{"k", p.k()}, {"n", p.n()}, {"replications", reps}, {"rows", rows}};
    o.emit(report::make_manifest("simulate", resolved_parameters(sub), seed), text.str(), j, csv);
  }
};

// ---- solve ----

struct SolveCmd {
  Common c;
  CLI::App* sub = nullptr;
  int B = 40;
  double tol = 1e-12;
  std::int64_t max_sweeps = 2'000'000;
  std::vector<int> sweep;
  std::string dump_pi;

  void attach(CLI::App& app) {
    sub = app.add_subcommand("solve", "stationary law of the chain truncated at B per slot");
    add_params(sub, c);
    sub->add_option("--B", B, "per-slot cap");
    sub->add_option("--tol", tol, "stop when ||pi P - pi||_1 <= tol")->check(CLI::PositiveNumber);
    sub->add_option("--max-sweeps", max_sweeps, "iteration limit");
    sub->add_option("--sweep", sweep, "increasing caps for a convergence sweep")->delimiter(',');
    sub->add_option("--dump-pi", dump_pi, "write pi as CSV (coordinates, probability)");
    add_output(sub, c, "text");
  }

  void run(std::ostream& out) {
    const SwitchParams p(c.k, c.n, c.mu, c.q);
    Output o(out, c);
    std::vector<report::SolveRecord> recs;
    if (!sweep.empty()) {
      if (!dump_pi.empty()) fail(ErrorKind::ConfigInvalid, "--dump-pi needs a single --B, not --sweep");
      for (const auto& row : solve::convergence_sweep(p, sweep, tol, max_sweeps)) {
        recs.push_back(report::solve_record(p, row));
      }
    } else {
      const auto chain = solve::build(p, B);
      const auto r = solve::stationary(chain, tol, max_sweeps);
      recs.push_back(report::solve_record(p, r));
      if (!dump_pi.empty()) write_pi(chain, r);
    }
    std::ostringstream text;
    text << "B pi_R0 expected_qubits A B_aggr residual boundary_mass\n";
    std::string csv = report::solve_csv_header() + "\n";
    Json rows = Json::array();
    for (const auto& r : recs) {
      text << r.B << " " << fmt_text(r.pi_R0) << " " << fmt_text(r.expected_qubits) << " " << fmt_text(r.A) << " "
           << fmt_text(r.B_aggr) << " " << fmt_text(r.residual) << " " << fmt_text(r.boundary_mass) << "\n";
      csv += report::to_csv_row(r) + "\n";
      rows.push_back(report::to_json(r));
    }
    o.emit(report::make_manifest("solve", resolved_parameters(sub)), text.str(), Json{{"rows", rows}}, csv);
  }

  void write_pi(const solve::TruncatedChain& chain, const solve::StationaryResult& r) const {
    std::string body;
    for (int i = 1; i <= chain.dim(); ++i) body += "x" + std::to_string(i) + ",";
    body += "pi\n";
    for (std::size_t s = 0; s < chain.size(); ++s) {
      const auto x = chain.state_at(s);
      for (std::size_t i = 0; i < x.size(); ++i) body += std::to_string(x[i]) + ",";
      body += fmt_exact(r.pi[s]) + "\n";
    }
    Output::write_file(dump_pi, body);
    auto m = report::make_manifest("solve", resolved_parameters(sub));
    m.outputs.push_back(dump_pi);
    Output::write_manifest(dump_pi, m);
  }
};

// ---- drift ----

struct DriftCmd {
  Common c;
  CLI::App* sub = nullptr;
  std::optional<double> alpha;
  std::optional<double> b;
  std::int64_t m_cap = 1'000'000'000;

  void attach(CLI::App& app) {
    sub = app.add_subcommand("drift", "negative-drift certificate for the embedded chain");
    add_params(sub, c);
    auto* a = sub->add_option("--alpha", alpha, "Lyapunov weight, 0 < alpha < 1/(n-1); default 0.5/(n-1)");
    auto* bo = sub->add_option("--b", b, "cross-term weight of V instead of --alpha");
    a->excludes(bo);
    sub->add_option("--m-cap", m_cap, "largest admissible threshold M");
    add_output(sub, c, "text");
  }

  int run(std::ostream& out) {
    const SwitchParams p(c.k, c.n, c.mu, c.q);
    Output o(out, c);
    const auto cfg = b ? lyapunov::LyapunovConfig::from_b(c.n, *b)
                       : lyapunov::LyapunovConfig::from_alpha(c.n, alpha.value_or(0.5 / (c.n - 1)));
    const auto cert = lyapunov::evaluate_certificate(p, cfg, m_cap);

    std::ostringstream text;
    text << "k " << c.k << " n " << c.n << " b " << fmt_text(cfg.b);
    if (cfg.alpha) text << " alpha " << fmt_text(*cfg.alpha);
    text << " epsilon " << fmt_text(cert.epsilon) << "\n";
    text << "stratum coefficient constant threshold\n";
    text << "interior " << fmt_text(cert.interior_coefficient) << " " << fmt_text(cert.interior_constant) << " "
         << fmt_text(cert.interior_threshold) << "\n";
    std::string csv = "stratum,coefficient,constant,threshold\ninterior," + fmt_exact(cert.interior_coefficient) +
                      "," + fmt_exact(cert.interior_constant) + "," + fmt_exact(cert.interior_threshold) + "\n";
    Json strata = Json::array();
    for (const auto& s : cert.strata) {
      text << s.j << " " << fmt_text(s.coefficient) << " " << fmt_text(s.delta) << " " << fmt_text(s.threshold) << "\n";
      csv += std::to_string(s.j) + "," + fmt_exact(s.coefficient) + "," + fmt_exact(s.delta) + "," +
             fmt_exact(s.threshold) + "\n";
      strata.push_back({{"j", s.j}, {"C_j", s.coefficient}, {"delta_j", s.delta}, {"threshold", s.threshold}});
    }
    Json j{{"k", c.k},
           {"n", c.n},
           {"b", cfg.b},
           {"epsilon", cert.epsilon},
           {"interior",
            {{"coefficient", cert.interior_coefficient},
             {"constant", cert.interior_constant},
             {"threshold", cert.interior_threshold}}},
           {"strata", strata},
           {"M", cert.M},
           {"certified", cert.ok()}};
    if (cfg.alpha) j["alpha"] = *cfg.alpha;
    if (cert.ok()) {
      text << "M " << cert.M << "\ncertified yes\n";
    } else {
      text << "certified no: " << *cert.failure << "\n";
      j["failure"] = *cert.failure;
    }
    if (c.k == c.n) {
      const auto inst = lyapunov::instability_conditions(c.k, c.n);
      text << "interior_total_drift " << fmt_text(inst.interior_total_drift) << "\nboundary_min_drift "
           << fmt_text(inst.boundary_min_drift) << "\ninstability_conditions "
           << (inst.conditions_hold ? "hold" : "do not hold") << "\n";
      j["instability"] = {{"interior_total_drift", inst.interior_total_drift},
                          {"boundary_min_drift", inst.boundary_min_drift},
                          {"interior_drift_zero", inst.interior_drift_zero},
                          {"boundary_nonnegative", inst.boundary_nonnegative},
                          {"conditions_hold", inst.conditions_hold}};
    }
    o.emit(report::make_manifest("drift", resolved_parameters(sub)), text.str(), j, csv);
    return cert.ok() ? kExitOk : kExitTolerance;
  }
};

// ---- identities ----

struct IdentitiesCmd {
  Common c;
  CLI::App* sub = nullptr;
  std::string grid = "default";
  double tol = 1e-9;

  void attach(CLI::App& app) {
    sub = app.add_subcommand("identities", "truncated sums against their closed forms");
    sub->add_option("--grid", grid, "default (k 5..10, L <= 3) or small")->check(CLI::IsMember({"default", "small"}));
    sub->add_option("--tol", tol, "largest admissible residual")->check(CLI::PositiveNumber);
    add_output(sub, c, "text");
  }

  int run(std::ostream& out) {
    Output o(out, c);
    comb::IdentityGrid g;
    if (grid == "small") {
      g.k_max = 6;
      g.L_max = 1;
      g.alternating_n_max = 6;
    }
    const auto suite = comb::identity_suite(g);
    std::ostringstream text;
    std::string csv = "family,k,J,L,m,g,lhs,rhs,residual,tail_bound\n";
    Json rows = Json::array();
    text << "family k J L m g lhs rhs residual tail_bound\n";
    for (const auto& r : suite.rows) {
      text << r.family << " " << r.k << " " << r.J << " " << r.L << " " << r.m << " " << r.g << " " << fmt_text(r.lhs)
           << " " << fmt_text(r.rhs) << " " << fmt_text(r.residual) << " " << fmt_text(r.tail_bound) << "\n";
      csv += r.family + "," + std::to_string(r.k) + "," + std::to_string(r.J) + "," + std::to_string(r.L) + "," +
             std::to_string(r.m) + "," + std::to_string(r.g) + "," + fmt_exact(r.lhs) + "," + fmt_exact(r.rhs) + "," +
             fmt_exact(r.residual) + "," + fmt_exact(r.tail_bound) + "\n";
      rows.push_back({{"family", r.family}, {"k", r.k}, {"J", r.J}, {"L", r.L}, {"m", r.m}, {"g", r.g},
                      {"lhs", r.lhs}, {"rhs", r.rhs}, {"residual", r.residual}, {"tail_bound", r.tail_bound}});
    }
    const bool ok = suite.max_residual <= tol && suite.alternating_exact;
    text << "rows " << suite.rows.size() << "\nmax_residual " << fmt_text(suite.max_residual) << "\nmax_tail_bound "
         << fmt_text(suite.max_tail_bound) << "\nalternating_exact " << (suite.alternating_exact ? "yes" : "no")
         << "\nstatus " << (ok ? "ok" : "FAIL") << "\n";
    Json j{{"rows", rows},
           {"max_residual", suite.max_residual},
           {"max_tail_bound", suite.max_tail_bound},
           {"alternating_exact", suite.alternating_exact},
           {"ok", ok}};
    o.emit(report::make_manifest("identities", resolved_parameters(sub)), text.str(), j, csv);
    return ok ? kExitOk : kExitTolerance;
  }
};

// ---- sweep ----

struct SweepCmd {
  Common c;
  CLI::App* sub = nullptr;
  int k_min = 3;
  int k_max = 100;

  void attach(CLI::App& app) {
    sub = app.add_subcommand("sweep", "E|Q| over the (k, n) heat-map grid");
    sub->add_option("--kmin", k_min, "smallest k");
    sub->add_option("--kmax", k_max, "largest k");
    add_output(sub, c, "csv");
  }

  void run(std::ostream& out) {
    Output o(out, c);
    const auto cells = analytic::heatmap_grid(k_min, k_max);
    std::ostringstream text;
    std::string csv = report::sweep_csv_header() + "\n";
    Json rows = Json::array();
    text << "k n expected_qubits log10_expected_qubits\n";
    for (const auto& cell : cells) {
      text << cell.k << " " << cell.n << " " << fmt_text(cell.expected_qubits) << " "
           << fmt_text(cell.log10_expected_qubits) << "\n";
      csv += report::to_csv_row(cell) + "\n";
      rows.push_back({{"k", cell.k},
                      {"n", cell.n},
                      {"expected_qubits", cell.expected_qubits},
                      {"log10_expected_qubits", cell.log10_expected_qubits}});
    }
    o.emit(report::make_manifest("sweep", resolved_parameters(sub)), text.str(), Json{{"rows", rows}}, csv);
  }
};

// Flat key=value file; a key becomes --key unless that flag is already on
// the command line, so flags win over the file and the file over defaults.
std::vector<std::string> merge_config(const CLI::App& app, const std::vector<std::string>& args) {
  std::string path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) fail(ErrorKind::ConfigInvalid, "--config needs a file");
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (path.empty()) return rest;

  const CLI::App* sub = nullptr;
  for (const auto& a : rest) {
    if (a.rfind("-", 0) == 0) continue;
    for (const CLI::App* s : app.get_subcommands({})) {
      if (s->get_name() == a) sub = s;
    }
    break;
  }
  if (sub == nullptr) fail(ErrorKind::ConfigInvalid, "--config needs a subcommand");

  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigINI().from_file(path);
  } catch (const CLI::Error& e) {
    fail(ErrorKind::ConfigInvalid, "cannot read config " + path + ": " + e.what());
  }
  for (const auto& item : items) {
    const std::string flag = "--" + item.name;
    const CLI::Option* opt = sub->get_option_no_throw(flag);
    if (opt == nullptr) fail(ErrorKind::ConfigInvalid, "config key '" + item.name + "' is not an option of " + sub->get_name());
    const bool given = std::any_of(rest.begin(), rest.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
    if (given) continue;
    const std::string value = joined(item.inputs);
    if (opt->get_type_size() == 0) {
      if (value == "true" || value == "1") {
        rest.push_back(flag);
      } else if (value != "false" && value != "0") {
        fail(ErrorKind::ConfigInvalid, "config key '" + item.name + "' expects true or false");
      }
    } else {
      rest.push_back(flag + "=" + value);
    }
  }
  return rest;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Performance model of an n-partite entanglement switch", "entswitch"};
  app.set_version_flag("--version", std::string(report::version()));
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.add_option("--config", "flat key=value file applied to the chosen subcommand");

  AnalyticCmd analytic_cmd;
  SimulateCmd simulate_cmd;
  SolveCmd solve_cmd;
  DriftCmd drift_cmd;
  IdentitiesCmd identities_cmd;
  SweepCmd sweep_cmd;
  analytic_cmd.attach(app);
  simulate_cmd.attach(app);
  solve_cmd.attach(app);
  drift_cmd.attach(app);
  identities_cmd.attach(app);
  sweep_cmd.attach(app);

  try {
    const std::vector<std::string> merged = merge_config(app, args);
    std::vector<std::string> argv_store{"entswitch"};
    argv_store.insert(argv_store.end(), merged.begin(), merged.end());
    std::vector<const char*> argv;
    for (const auto& s : argv_store) argv.push_back(s.c_str());
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? kExitOk : kExitRejected;
    }

    if (analytic_cmd.sub->parsed()) analytic_cmd.run(out);
    if (simulate_cmd.sub->parsed()) simulate_cmd.run(out);
    if (solve_cmd.sub->parsed()) solve_cmd.run(out);
    if (sweep_cmd.sub->parsed()) sweep_cmd.run(out);
    if (drift_cmd.sub->parsed()) return drift_cmd.run(out);
    if (identities_cmd.sub->parsed()) return identities_cmd.run(out);
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace entswitch::cli
