#pragma once

#include <span>
#include <vector>

#include "entswitch/model.hpp"

namespace entswitch::analytic {

// Closed-form performance figures of a stable switch.
struct AnalyticReport {
  double capacity = 0.0;         // successful swaps per unit time
  double expected_qubits = 0.0;  // E|Q|
  double pi_R0 = 0.0;            // stationary mass of the swap-ready region
  double aggregate_A = 0.0;      // sum over R_0 of pi(x)|x|
  double aggregate_B = 0.0;      // sum over R_1..R_{n-2} of pi(x)|x|
  bool stable = false;
};

enum class Stability { Stable, Unstable };

// Exact rational forms. All of them throw UnstableRegime when k <= n.
Rational expected_qubits_exact(int k, int n);
Rational pi_R0_exact(int k, int n);
struct AggregatesExact {
  Rational A;
  Rational B;
};
AggregatesExact aggregates_AB_exact(int k, int n);
Rational psi_j_exact(int k, int n, int j);

// q * mu * k / n.
double capacity(const SwitchParams& params);

// k (n - 1) / (2 (k - n)); n = 2 is admitted here for the heat-map grid.
double expected_qubits(int k, int n);

// k / (n (k - n + 1)).
double pi_R0(int k, int n);

struct Aggregates {
  double A;
  double B;
};
Aggregates aggregates_AB(int k, int n);

// Stable iff k > n. Throws InvalidParams when k < n or n < 3.
Stability stability(int k, int n);

// q k max(rates) / n for links with unequal generation rates.
double capacity_upper_bound_heterogeneous(std::span<const double> rates, int n, double q);

// Expected number of uniformized steps spent outside S after entering it at
// stratum S_j: sum_{l=1}^{j} k / (k - n + l + 1). Valid for 1 <= j <= n - 1,
// k >= n. The largest of these plus n - 1 bounds the gap between |X_t| and the
// embedded chain.
double psi_j(int k, int n, int j);

AnalyticReport analyze(const SwitchParams& params);

struct HeatmapCell {
  int k;
  int n;
  double expected_qubits;
  double log10_expected_qubits;
};

// Grid of E|Q| for k in [k_min, k_max] and 2 <= n <= k - 1.
std::vector<HeatmapCell> heatmap_grid(int k_min = 3, int k_max = 100);

}  // namespace entswitch::analytic
