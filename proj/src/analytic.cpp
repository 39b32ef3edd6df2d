#include "entswitch/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace entswitch::analytic {
namespace {

double to_double(const Rational& r) { return r.convert_to<double>(); }

void require_stable(int k, int n, int n_min) {
  if (n < n_min) fail(ErrorKind::InvalidParams, "n must be at least " + std::to_string(n_min));
  if (k <= n) fail(ErrorKind::UnstableRegime, "unstable: k must exceed n");
}

}  // namespace

Rational expected_qubits_exact(int k, int n) {
  require_stable(k, n, 2);
  return Rational(k * (n - 1), 2 * (k - n));
}

Rational pi_R0_exact(int k, int n) {
  require_stable(k, n, 2);
  return Rational(k, n * (k - (n - 1)));
}

AggregatesExact aggregates_AB_exact(int k, int n) {
  require_stable(k, n, 2);
  const BigInt kk = k, nn = n;
  Rational A(kk * (nn - 1) * (2 * kk - nn), 2 * nn * (kk - nn) * (kk - (nn - 1)));
  Rational B(kk * (nn - 1) * (nn - 2), 2 * nn * (kk - (nn - 1)));
  return {A, B};
}

Rational psi_j_exact(int k, int n, int j) {
  if (k < n) fail(ErrorKind::InvalidParams, "psi_j requires k >= n");
  if (j < 1 || j > n - 1) fail(ErrorKind::IndexOutOfRange, "psi_j needs 1 <= j <= n-1");
  Rational s = 0;
  for (int l = 1; l <= j; ++l) s += Rational(k, k - n + l + 1);
  return s;
}

double capacity(const SwitchParams& params) {
  require_stable(params.k(), params.n(), 3);
  return params.q() * params.mu() * to_double(Rational(params.k(), params.n()));
}

double expected_qubits(int k, int n) { return to_double(expected_qubits_exact(k, n)); }

double pi_R0(int k, int n) { return to_double(pi_R0_exact(k, n)); }

Aggregates aggregates_AB(int k, int n) {
  auto ab = aggregates_AB_exact(k, n);
  return {to_double(ab.A), to_double(ab.B)};
}

Stability stability(int k, int n) {
  if (n < 3) fail(ErrorKind::InvalidParams, "n must be at least 3");
  if (k < n) fail(ErrorKind::InvalidParams, "k must be at least n");
  return k > n ? Stability::Stable : Stability::Unstable;
}

double capacity_upper_bound_heterogeneous(std::span<const double> rates, int n, double q) {
  if (rates.empty()) fail(ErrorKind::InvalidParams, "rate list must be non-empty");
  if (n < 3) fail(ErrorKind::InvalidParams, "n must be at least 3");
  if (!(q >= 0.0 && q <= 1.0)) fail(ErrorKind::InvalidParams, "q must lie in [0, 1]");
  for (double r : rates) {
    if (!(r > 0.0)) fail(ErrorKind::InvalidParams, "rates must be positive");
  }
  const double mu_max = *std::max_element(rates.begin(), rates.end());
  return q * static_cast<double>(rates.size()) * mu_max / n;
}

double psi_j(int k, int n, int j) { return to_double(psi_j_exact(k, n, j)); }

AnalyticReport analyze(const SwitchParams& params) {
  const int k = params.k();
  const int n = params.n();
  AnalyticReport r;
  r.stable = stability(k, n) == Stability::Stable;
  if (!r.stable) fail(ErrorKind::UnstableRegime, "unstable: k must exceed n");
  r.capacity = capacity(params);
  r.expected_qubits = expected_qubits(k, n);
  r.pi_R0 = pi_R0(k, n);
  const auto ab = aggregates_AB(k, n);
  r.aggregate_A = ab.A;
  r.aggregate_B = ab.B;
  return r;
}

std::vector<HeatmapCell> heatmap_grid(int k_min, int k_max) {
  if (k_min < 3 || k_max < k_min) fail(ErrorKind::InvalidParams, "heat-map needs 3 <= k_min <= k_max");
  std::vector<HeatmapCell> grid;
  for (int k = k_min; k <= k_max; ++k) {
    for (int n = 2; n <= k - 1; ++n) {
      const double e = expected_qubits(k, n);
      grid.push_back({k, n, e, std::log10(e)});
    }
  }
  return grid;
}

}  // namespace entswitch::analytic
