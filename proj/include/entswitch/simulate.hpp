#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "entswitch/model.hpp"

namespace entswitch::simulate {

// steps counts uniformized transitions per replication; the first `warmup`
// of them are discarded.
struct SimConfig {
  std::int64_t steps = 1'000'000;
  std::int64_t warmup = 50'000;
  std::uint64_t seed = 1;
  int replications = 1;
  int batches = 50;

  // warmup defaults to 5% of steps.
  static SimConfig with_steps(std::int64_t steps, std::uint64_t seed);
  // Throws ConfigInvalid.
  void validate() const;
};

struct Estimate {
  double value = 0.0;
  double halfwidth = 0.0;  // 95% confidence
};

struct SimReport {
  Estimate capacity;         // successful swaps per unit model time
  Estimate capacity_scaled;  // q * attempts per unit model time
  Estimate occupancy;        // time-average |x|
  Estimate r0_fraction;
  std::int64_t attempts = 0;
  std::int64_t successes = 0;
  double elapsed_model_time = 0.0;
};

struct EmbeddedReport {
  Estimate mean_Y;                         // average |Y| over visits to S
  std::vector<double> batch_mean_Y;        // per batch, in order
  std::vector<double> excursion_mean;      // index j = 1..n-1; slot 0 unused
  std::vector<std::int64_t> excursion_count;
  std::int64_t visits = 0;
};

struct ProbeRow {
  std::int64_t horizon = 0;
  double median_total = 0.0;
  Estimate mean_total;  // across replications
};

// Splittable seeding: stream s of a seed yields an independent engine.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream);

// Draws the next state from the kernel listing; used as a reference sampler.
OccupancyState sample_next(const SwitchParams& params, const OccupancyState& state, std::mt19937_64& rng);

// The sampler used by run(), advanced by one step; returns true on a swap
// attempt. Exposed so it can be checked against the kernel listing.
bool fast_step(const SwitchParams& params, std::vector<std::int64_t>& x, std::mt19937_64& rng);

SimReport run(const SwitchParams& params, const SimConfig& config);
EmbeddedReport run_embedded(const SwitchParams& params, const SimConfig& config);

// |X_T| across independent replications started empty, at each horizon.
std::vector<ProbeRow> growth_table(const SwitchParams& params, const std::vector<std::int64_t>& horizons,
                                   int replications, std::uint64_t seed);
// growth_table restricted to k = n. Throws NotCritical otherwise.
std::vector<ProbeRow> instability_probe(const SwitchParams& params, const std::vector<std::int64_t>& horizons,
                                        int replications, std::uint64_t seed);

// Two-sided 95% Student-t interval for the mean of the given samples.
Estimate mean_ci(const std::vector<double>& samples);

}  // namespace entswitch::simulate
