#include "entswitch/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

#include "entswitch/error.hpp"

namespace entswitch::simulate {
namespace {

std::uint64_t splitmix64(std::uint64_t& s) {
  std::uint64_t z = (s += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Lemire's multiply-shift with rejection; unbiased on [0, bound).
inline std::uint64_t uniform_below(std::mt19937_64& g, std::uint64_t bound) {
  unsigned __int128 m = static_cast<unsigned __int128>(g()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(g()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

inline double uniform01(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

// Chain state with cached aggregates so one step costs O(1) on arrivals.
struct Chain {
  std::vector<std::int64_t> x;
  std::int64_t total = 0;
  int zeros = 0;

  explicit Chain(int dim) : x(static_cast<std::size_t>(dim), 0), zeros(dim) {}

  // Returns true when the step was a swap attempt.
  bool step(std::uint64_t k, std::mt19937_64& rng) {
    const auto dim = static_cast<std::uint64_t>(x.size());
    const std::uint64_t link = uniform_below(rng, k);
    if (link < dim && x[link] > 0) {
      ++x[link];
      ++total;
      return false;
    }
    if (zeros == 0) {
      for (auto& v : x) {
        --v;
        if (v == 0) ++zeros;
      }
      total -= static_cast<std::int64_t>(dim);
      return true;
    }
    auto pick = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(zeros)));
    for (auto& v : x) {
      if (v == 0 && pick-- == 0) {
        v = 1;
        break;
      }
    }
    --zeros;
    ++total;
    return false;
  }
};

constexpr std::uint64_t kChainStream = 0;
constexpr std::uint64_t kSwapStream = 1;

std::uint64_t replication_stream(int rep, std::uint64_t which) { return 2 * static_cast<std::uint64_t>(rep) + which; }

double t_quantile(int df) {
  boost::math::students_t dist(static_cast<double>(df));
  return boost::math::quantile(boost::math::complement(dist, 0.025));
}

struct Batch {
  std::int64_t steps = 0;
  long double sum_total = 0.0L;
  std::int64_t r0 = 0;
  std::int64_t attempts = 0;
  std::int64_t successes = 0;
  // Embedded-chain statistics.
  long double sum_Y = 0.0L;
  std::int64_t visits = 0;
};

struct Replication {
  std::vector<Batch> batches;
  std::vector<long double> excursion_sum;
  std::vector<std::int64_t> excursion_count;
};

std::size_t batch_of(std::int64_t t, std::int64_t warmup, std::int64_t batch_len, int batches) {
  return static_cast<std::size_t>(std::min<std::int64_t>((t - warmup) / batch_len, batches - 1));
}

Replication simulate_one(const SwitchParams& params, const SimConfig& cfg, int rep, bool track_excursions) {
  std::mt19937_64 chain_rng = make_stream(cfg.seed, replication_stream(rep, kChainStream));
  std::mt19937_64 swap_rng = make_stream(cfg.seed, replication_stream(rep, kSwapStream));
  const auto k = static_cast<std::uint64_t>(params.k());
  const double q = params.q();
  const int dim = params.dim();
  Chain chain(dim);

  Replication out;
  out.batches.resize(static_cast<std::size_t>(cfg.batches));
  out.excursion_sum.assign(static_cast<std::size_t>(dim) + 1, 0.0L);
  out.excursion_count.assign(static_cast<std::size_t>(dim) + 1, 0);
  const std::int64_t batch_len = std::max<std::int64_t>(1, (cfg.steps - cfg.warmup) / cfg.batches);

  int excursion_stratum = 0;
  std::int64_t excursion_len = 0;
  for (std::int64_t t = 0; t < cfg.steps; ++t) {
    const bool recording = t >= cfg.warmup;
    const bool in_R0 = chain.zeros == 0;
    Batch* b = recording ? &out.batches[batch_of(t, cfg.warmup, batch_len, cfg.batches)] : nullptr;
    if (b != nullptr) {
      ++b->steps;
      b->sum_total += chain.total;
      if (in_R0) {
        ++b->r0;
        b->sum_Y += chain.total;
        ++b->visits;
      }
    }
    if (track_excursions && excursion_stratum > 0) ++excursion_len;

    const bool swap = chain.step(k, chain_rng);
    if (swap) {
      const bool success = uniform01(swap_rng) < q;
      if (b != nullptr) {
        ++b->attempts;
        if (success) ++b->successes;
      }
      if (track_excursions && chain.zeros > 0) {
        excursion_stratum = recording ? chain.zeros : -1;
        excursion_len = 0;
      }
    }
    if (track_excursions && excursion_stratum != 0 && chain.zeros == 0) {
      if (excursion_stratum > 0) {
        out.excursion_sum[excursion_stratum] += excursion_len;
        ++out.excursion_count[excursion_stratum];
      }
      excursion_stratum = 0;
    }
  }
  return out;
}

// Runs fn(rep) for every replication on a small worker pool; results are
// stored by index so the merge order never depends on scheduling.
template <typename Result, typename Fn>
std::vector<Result> run_replications(int replications, Fn fn) {
  std::vector<Result> results(static_cast<std::size_t>(replications));
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = std::min<unsigned>(hw, static_cast<unsigned>(replications));
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (int rep = next++; rep < replications; rep = next++) {
      try {
        results[rep] = fn(rep);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  return results;
}

}  // namespace

SimConfig SimConfig::with_steps(std::int64_t steps, std::uint64_t seed) {
  SimConfig c;
  c.steps = steps;
  c.warmup = steps / 20;
  c.seed = seed;
  return c;
}

void SimConfig::validate() const {
  if (steps <= 0) fail(ErrorKind::ConfigInvalid, "steps must be positive");
  if (warmup < 0 || warmup >= steps) fail(ErrorKind::ConfigInvalid, "warmup must satisfy 0 <= warmup < steps");
  if (batches < 10) fail(ErrorKind::ConfigInvalid, "batches must be at least 10");
  if (replications < 1) fail(ErrorKind::ConfigInvalid, "replications must be at least 1");
  if (steps - warmup < batches) fail(ErrorKind::ConfigInvalid, "fewer recorded steps than batches");
}

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed ^ (0xD1B54A32D192ED03ULL * (stream + 1));
  std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(s)), static_cast<std::uint32_t>(splitmix64(s)),
                    static_cast<std::uint32_t>(splitmix64(s)), static_cast<std::uint32_t>(splitmix64(s)),
                    static_cast<std::uint32_t>(splitmix64(s)), static_cast<std::uint32_t>(splitmix64(s)),
                    static_cast<std::uint32_t>(splitmix64(s)), static_cast<std::uint32_t>(splitmix64(s))};
  return std::mt19937_64(seq);
}

OccupancyState sample_next(const SwitchParams& params, const OccupancyState& state, std::mt19937_64& rng) {
  const TransitionList row = dtmc_transitions(params, state);
  const double u = uniform01(rng);
  double acc = 0.0;
  for (const auto& t : row.entries) {
    acc += t.weight;
    if (u < acc) return t.target;
  }
  return row.entries.back().target;
}

bool fast_step(const SwitchParams& params, std::vector<std::int64_t>& x, std::mt19937_64& rng) {
  Chain chain(static_cast<int>(x.size()));
  chain.x = x;
  chain.total = std::accumulate(x.begin(), x.end(), std::int64_t{0});
  chain.zeros = static_cast<int>(std::count(x.begin(), x.end(), 0));
  const bool swap = chain.step(static_cast<std::uint64_t>(params.k()), rng);
  x = chain.x;
  return swap;
}

Estimate mean_ci(const std::vector<double>& samples) {
  Estimate e;
  if (samples.empty()) return e;
  const double n = static_cast<double>(samples.size());
  e.value = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  if (samples.size() < 2) return e;
  double ss = 0.0;
  for (double s : samples) ss += (s - e.value) * (s - e.value);
  const double sd = std::sqrt(ss / (n - 1.0));
  e.halfwidth = t_quantile(static_cast<int>(samples.size()) - 1) * sd / std::sqrt(n);
  return e;
}

SimReport run(const SwitchParams& params, const SimConfig& config) {
  config.validate();
  const auto reps = run_replications<Replication>(
      config.replications, [&](int rep) { return simulate_one(params, config, rep, false); });

  const double rate = params.k() * params.mu();
  std::vector<double> cap, cap_scaled, occ, r0;
  std::int64_t steps = 0, r0_steps = 0;
  long double sum_total = 0.0L;
  SimReport report;
  for (const auto& rep : reps) {
    for (const auto& b : rep.batches) {
      if (b.steps == 0) continue;
      const double time = static_cast<double>(b.steps) / rate;
      cap.push_back(static_cast<double>(b.successes) / time);
      cap_scaled.push_back(params.q() * static_cast<double>(b.attempts) / time);
      occ.push_back(static_cast<double>(b.sum_total / b.steps));
      r0.push_back(static_cast<double>(b.r0) / static_cast<double>(b.steps));
      steps += b.steps;
      r0_steps += b.r0;
      sum_total += b.sum_total;
      report.attempts += b.attempts;
      report.successes += b.successes;
    }
  }
  report.elapsed_model_time = static_cast<double>(steps) / rate;
  report.capacity = mean_ci(cap);
  report.capacity.value = static_cast<double>(report.successes) / report.elapsed_model_time;
  report.capacity_scaled = mean_ci(cap_scaled);
  report.capacity_scaled.value = params.q() * static_cast<double>(report.attempts) / report.elapsed_model_time;
  report.occupancy = mean_ci(occ);
  report.occupancy.value = static_cast<double>(sum_total / steps);
  report.r0_fraction = mean_ci(r0);
  report.r0_fraction.value = static_cast<double>(r0_steps) / static_cast<double>(steps);
  return report;
}

EmbeddedReport run_embedded(const SwitchParams& params, const SimConfig& config) {
  config.validate();
  if (!params.stable()) fail(ErrorKind::UnstableRegime, "unstable: k must exceed n");
  const auto reps = run_replications<Replication>(
      config.replications, [&](int rep) { return simulate_one(params, config, rep, true); });

  const int dim = params.dim();
  EmbeddedReport report;
  report.excursion_mean.assign(static_cast<std::size_t>(dim) + 1, 0.0);
  report.excursion_count.assign(static_cast<std::size_t>(dim) + 1, 0);
  std::vector<long double> excursion_sum(static_cast<std::size_t>(dim) + 1, 0.0L);
  long double sum_Y = 0.0L;
  for (const auto& rep : reps) {
    for (const auto& b : rep.batches) {
      if (b.visits == 0) continue;
      report.batch_mean_Y.push_back(static_cast<double>(b.sum_Y / b.visits));
      sum_Y += b.sum_Y;
      report.visits += b.visits;
    }
    for (int j = 1; j <= dim; ++j) {
      excursion_sum[j] += rep.excursion_sum[j];
      report.excursion_count[j] += rep.excursion_count[j];
    }
  }
  report.mean_Y = mean_ci(report.batch_mean_Y);
  if (report.visits > 0) report.mean_Y.value = static_cast<double>(sum_Y / report.visits);
  for (int j = 1; j <= dim; ++j) {
    if (report.excursion_count[j] > 0) {
      report.excursion_mean[j] = static_cast<double>(excursion_sum[j] / report.excursion_count[j]);
    }
  }
  return report;
}

std::vector<ProbeRow> growth_table(const SwitchParams& params, const std::vector<std::int64_t>& horizons,
                                   int replications, std::uint64_t seed) {
  if (horizons.empty()) fail(ErrorKind::ConfigInvalid, "at least one horizon is required");
  if (replications < 1) fail(ErrorKind::ConfigInvalid, "replications must be at least 1");
  std::vector<std::int64_t> sorted = horizons;
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() < 0) fail(ErrorKind::ConfigInvalid, "horizons must be non-negative");
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  const auto k = static_cast<std::uint64_t>(params.k());
  const auto samples = run_replications<std::vector<double>>(replications, [&](int rep) {
    std::mt19937_64 rng = make_stream(seed, replication_stream(rep, kChainStream));
    Chain chain(params.dim());
    std::vector<double> at(sorted.size());
    std::int64_t t = 0;
    for (std::size_t h = 0; h < sorted.size(); ++h) {
      for (; t < sorted[h]; ++t) chain.step(k, rng);
      at[h] = static_cast<double>(chain.total);
    }
    return at;
  });

  std::vector<ProbeRow> rows;
  for (std::size_t h = 0; h < sorted.size(); ++h) {
    std::vector<double> col;
    col.reserve(samples.size());
    for (const auto& s : samples) col.push_back(s[h]);
    ProbeRow row;
    row.horizon = sorted[h];
    row.mean_total = mean_ci(col);
    std::sort(col.begin(), col.end());
    const std::size_t m = col.size();
    row.median_total = m % 2 == 1 ? col[m / 2] : 0.5 * (col[m / 2 - 1] + col[m / 2]);
    rows.push_back(row);
  }
  return rows;
}

std::vector<ProbeRow> instability_probe(const SwitchParams& params, const std::vector<std::int64_t>& horizons,
                                        int replications, std::uint64_t seed) {
  if (params.k() != params.n()) fail(ErrorKind::NotCritical, "instability probe needs k = n");
  return growth_table(params, horizons, replications, seed);
}

}  // namespace entswitch::simulate
