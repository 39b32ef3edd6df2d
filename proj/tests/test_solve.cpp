#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <tuple>
#include <vector>

#include "entswitch/analytic.hpp"
#include "entswitch/solve.hpp"
#include "support.hpp"

using namespace entswitch;
using namespace entswitch::solve;

namespace {

// Dense solve of pi (P - I) = 0, sum pi = 1, by Gaussian elimination with
// the last balance equation replaced by normalization.
std::vector<double> dense_stationary(const TruncatedChain& c) {
  const std::size_t N = c.size();
  std::vector<std::vector<double>> a(N, std::vector<double>(N + 1, 0.0));
  for (std::size_t r = 0; r < N; ++r) {
    for (auto p = c.row_ptr()[r]; p < c.row_ptr()[r + 1]; ++p) a[c.cols()[p]][r] += c.vals()[p];
    a[r][r] -= 1.0;
  }
  for (std::size_t j = 0; j <= N; ++j) a[N - 1][j] = 1.0;
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < N; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    std::swap(a[col], a[piv]);
    for (std::size_t r = 0; r < N; ++r) {
      if (r == col || a[r][col] == 0.0) continue;
      const double f = a[r][col] / a[col][col];
      for (std::size_t j = col; j <= N; ++j) a[r][j] -= f * a[col][j];
    }
  }
  std::vector<double> pi(N);
  for (std::size_t i = 0; i < N; ++i) pi[i] = a[i][N] / a[i][i];
  return pi;
}

}  // namespace

TEST(Build, SmallChainShape) {
  const auto c = build(SwitchParams(4, 3), 3);
  EXPECT_EQ(c.size(), 16u);
  EXPECT_EQ(c.dim(), 2);
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_NEAR(c.row_sum(i), 1.0, 1e-12);
  EXPECT_EQ(build(SwitchParams(4, 3), 60).size(), 3721u);
  EXPECT_EQ(build(SwitchParams(6, 4), 10).size(), 1331u);
}

TEST(Build, ArrivalsPastCapBecomeSelfLoops) {
  const int B = 5;
  const auto c = build(SwitchParams(4, 3), B);
  const auto r = c.index_of(OccupancyState{B, 1});
  double self = 0.0;
  for (auto p = c.row_ptr()[r]; p < c.row_ptr()[r + 1]; ++p)
    if (static_cast<std::size_t>(c.cols()[p]) == r) self += c.vals()[p];
  EXPECT_NEAR(self, 0.25, 1e-15);
  const auto corner = c.index_of(OccupancyState{B, B});
  double corner_self = 0.0;
  for (auto p = c.row_ptr()[corner]; p < c.row_ptr()[corner + 1]; ++p)
    if (static_cast<std::size_t>(c.cols()[p]) == corner) corner_self += c.vals()[p];
  EXPECT_NEAR(corner_self, 0.5, 1e-15);
}

TEST(Build, IndexRoundTrip) {
  const auto c = build(SwitchParams(7, 4), 6);
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_EQ(c.index_of(c.state_at(i)), i);
  EXPECT_KIND(c.index_of(OccupancyState{7, 0, 0}), ErrorKind::IndexOutOfRange);
  EXPECT_KIND(c.index_of(OccupancyState{1, 1}), ErrorKind::InvalidParams);
  EXPECT_KIND(c.state_at(c.size()), ErrorKind::IndexOutOfRange);
}

TEST(Build, EllIsTransposeOfCsr) {
  const auto c = build(SwitchParams(5, 3), 8);
  const std::size_t N = c.size(), W = c.ell_width();
  std::vector<double> dense_csr(N * N, 0.0), dense_ell(N * N, 0.0);
  for (std::size_t r = 0; r < N; ++r)
    for (auto p = c.row_ptr()[r]; p < c.row_ptr()[r + 1]; ++p) dense_csr[r * N + c.cols()[p]] += c.vals()[p];
  for (std::size_t w = 0; w < W; ++w)
    for (std::size_t r = 0; r < N; ++r) dense_ell[c.ell_cols()[w * N + r] * N + r] += c.ell_vals()[w * N + r];
  for (std::size_t i = 0; i < N * N; ++i) EXPECT_NEAR(dense_csr[i], dense_ell[i], 1e-15);
}

TEST(Build, Rejections) {
  EXPECT_KIND(build(SwitchParams(3, 3), 10), ErrorKind::UnstableRegime);
  EXPECT_KIND(build(SwitchParams(5, 3), 2), ErrorKind::CapTooSmall);
  EXPECT_KIND(build(SwitchParams(8, 6), 31), ErrorKind::InvalidParams);
}

TEST(Stationary, MatchesDenseSolve) {
  for (const auto& [k, n, B] : std::vector<std::tuple<int, int, int>>{{4, 3, 6}, {5, 3, 9}, {6, 4, 5}}) {
    const auto c = build(SwitchParams(k, n), B);
    const auto r = stationary(c, 1e-13);
    const auto want = dense_stationary(c);
    double dist = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) dist += std::fabs(r.pi[i] - want[i]);
    EXPECT_LT(dist, 1e-10) << k << "," << n << "," << B;
    EXPECT_LE(dist, std::max(r.error_estimate * 10, 1e-12));
    EXPECT_NEAR(std::accumulate(r.pi.begin(), r.pi.end(), 0.0), 1.0, 1e-12);
  }
}

TEST(Stationary, TargetsAtLargeCap) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = stationary(build(SwitchParams(4, 3), 80), 1e-12);
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 30.0);
  EXPECT_NEAR(r.pi_R0, 2.0 / 3.0, 1e-8);
  EXPECT_NEAR(r.expected_qubits, 4.0, 1e-6);
  EXPECT_LE(r.residual, 1e-12);
  EXPECT_EQ(r.B_used, 80);
  EXPECT_LT(r.boundary_mass, 1e-10);

  const auto s = stationary(build(SwitchParams(5, 3), 80), 1e-12);
  const auto ab = analytic::aggregates_AB(5, 3);
  EXPECT_NEAR(s.aggregate_A, ab.A, 1e-8);
  EXPECT_NEAR(s.aggregate_B, ab.B, 1e-8);
  EXPECT_NEAR(s.aggregate_A + s.aggregate_B, s.expected_qubits, 1e-12);
  EXPECT_NEAR(s.pi_R0, 5.0 / 9.0, 1e-8);
}

TEST(Stationary, AggregatesSumToOccupancy) {
  // Only R_{n-1}, the empty state, carries |x| = 0 outside the two aggregates.
  for (const auto& [k, n, B] : std::vector<std::tuple<int, int, int>>{{6, 4, 20}, {7, 5, 14}, {9, 6, 10}}) {
    const auto r = stationary(build(SwitchParams(k, n), B), 1e-11);
    EXPECT_NEAR(r.aggregate_A + r.aggregate_B, r.expected_qubits, 1e-12);
    // Truncation cuts off the upper tail, so the occupancy is approached from below.
    const double eq = analytic::expected_qubits(k, n);
    EXPECT_LT(r.expected_qubits, eq);
    EXPECT_GT(r.expected_qubits, 0.99 * eq);
  }
}

TEST(Stationary, BalanceResiduals) {
  const auto c = build(SwitchParams(5, 3), 60);
  const auto r = stationary(c, 1e-12);
  const auto total = [](const OccupancyState& s) {
    double t = 0.0;
    for (auto v : s.values()) t += double(v);
    return t;
  };
  EXPECT_LE(balance_residual(c, r.pi, total), 1e-6);
  EXPECT_EQ(balance_residual(c, r.pi, [](const OccupancyState&) { return 1.0; }), 0.0);
  EXPECT_LE(balance_residual(c, r.pi, [&](const OccupancyState& s) { return total(s) * total(s); }), 1e-5);
  EXPECT_KIND(balance_residual(c, std::vector<double>(3, 0.0), total), ErrorKind::InvalidParams);
}

TEST(Stationary, PermutationSymmetric) {
  const auto c = build(SwitchParams(7, 4), 14);
  const auto r = stationary(c, 1e-12);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto s = c.state_at(i);
    const auto v = s.values();
    std::vector<std::int64_t> rot{v[1], v[2], v[0]}, sw{v[1], v[0], v[2]};
    EXPECT_NEAR(r.pi[i], r.pi[c.index_of(OccupancyState(rot))], 1e-10);
    EXPECT_NEAR(r.pi[i], r.pi[c.index_of(OccupancyState(sw))], 1e-10);
  }
}

TEST(Stationary, SlowerNearCriticality) {
  const auto near = stationary(build(SwitchParams(4, 3), 40), 1e-10);
  const auto far = stationary(build(SwitchParams(10, 3), 40), 1e-10);
  EXPECT_GT(near.sweeps, far.sweeps);
}

TEST(Stationary, NoConvergenceWithinSweepLimit) {
  EXPECT_KIND(stationary(build(SwitchParams(4, 3), 30), 1e-12, 10), ErrorKind::NoConvergence);
  EXPECT_KIND(stationary(build(SwitchParams(4, 3), 30), 0.0), ErrorKind::InvalidParams);
}

TEST(Sweep, ConvergesMonotonically) {
  // Successive errors shrink until they reach the iteration noise floor,
  // which the solver reports as error_estimate.
  const auto rows = convergence_sweep(SwitchParams(5, 3), {10, 20, 40, 80}, 1e-12);
  ASSERT_EQ(rows.size(), 4u);
  const double eq = analytic::expected_qubits(5, 3), pr = analytic::pi_R0(5, 3);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double floor_eq = 10.0 * rows[i].error_estimate * std::max(1.0, eq);
    const double floor_pi = 10.0 * rows[i].error_estimate;
    EXPECT_LE(std::fabs(rows[i].expected_qubits - eq), std::fabs(rows[i - 1].expected_qubits - eq) + floor_eq);
    EXPECT_LE(std::fabs(rows[i].pi_R0 - pr), std::fabs(rows[i - 1].pi_R0 - pr) + floor_pi);
    EXPECT_LT(rows[i].boundary_mass, rows[i - 1].boundary_mass);
    EXPECT_EQ(rows[i].B, std::vector<int>({10, 20, 40, 80})[i]);
  }
  EXPECT_NEAR(rows.back().expected_qubits, eq, 1e-8);
  EXPECT_KIND(convergence_sweep(SwitchParams(5, 3), {20, 10}), ErrorKind::InvalidParams);
}

TEST(Sweep, StrictlyMonotoneAtFourThree) {
  const auto rows = convergence_sweep(SwitchParams(4, 3), {10, 20, 40, 80}, 1e-12);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_LT(std::fabs(rows[i].expected_qubits - 4.0), std::fabs(rows[i - 1].expected_qubits - 4.0));
    EXPECT_LT(std::fabs(rows[i].pi_R0 - 2.0 / 3.0), std::fabs(rows[i - 1].pi_R0 - 2.0 / 3.0));
  }
}
