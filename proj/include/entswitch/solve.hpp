#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "entswitch/model.hpp"

namespace entswitch::solve {

// The chain restricted to {0..B}^{n-1}. Arrivals that would push a slot past
// B stay put instead.
class TruncatedChain {
 public:
  const SwitchParams& params() const noexcept { return params_; }
  int cap() const noexcept { return B_; }
  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return states_; }

  std::size_t index_of(const OccupancyState& state) const;
  OccupancyState state_at(std::size_t index) const;

  // Forward kernel in CSR form.
  const std::vector<std::int64_t>& row_ptr() const noexcept { return row_ptr_; }
  const std::vector<std::int32_t>& cols() const noexcept { return cols_; }
  const std::vector<double>& vals() const noexcept { return vals_; }

  // Transposed kernel in ELLPACK column-major layout, for pi -> pi P.
  std::size_t ell_width() const noexcept { return ell_width_; }
  const std::vector<std::int32_t>& ell_cols() const noexcept { return ell_cols_; }
  const std::vector<double>& ell_vals() const noexcept { return ell_vals_; }

  double row_sum(std::size_t index) const;

 private:
  friend TruncatedChain build(const SwitchParams& params, int B);
  explicit TruncatedChain(const SwitchParams& params) : params_(params) {}

  SwitchParams params_;
  int B_ = 0;
  int dim_ = 0;
  std::size_t states_ = 0;
  std::vector<std::int64_t> row_ptr_;
  std::vector<std::int32_t> cols_;
  std::vector<double> vals_;
  std::size_t ell_width_ = 0;
  std::vector<std::int32_t> ell_cols_;
  std::vector<double> ell_vals_;
};

// Throws UnstableRegime when k <= n, CapTooSmall when B < n, and
// InvalidParams for n - 1 > 4 with B > 30.
TruncatedChain build(const SwitchParams& params, int B);

struct StationaryResult {
  std::vector<double> pi;
  double residual = 0.0;  // ||pi P - pi||_1
  double pi_R0 = 0.0;
  double expected_qubits = 0.0;
  double aggregate_A = 0.0;  // sum over R_0 of pi |x|
  double aggregate_B = 0.0;  // sum over R_1..R_{n-2} of pi |x|
  int B_used = 0;
  double boundary_mass = 0.0;  // mass on states with some slot at B
  std::int64_t sweeps = 0;
  // Estimated ||pi - pi*||_1 from the observed contraction rate: the lazy
  // step size residual/2 summed as a geometric series.
  double error_estimate = 0.0;
};

// Power iteration on (I + P)/2, which shares the fixed point of P but not its
// period. Throws NoConvergence after max_sweeps.
StationaryResult stationary(const TruncatedChain& chain, double tol = 1e-12, std::int64_t max_sweeps = 2'000'000);

// |sum_x pi(x) E[V(X_1) - V(x) | X_0 = x]| with the untruncated kernel.
double balance_residual(const TruncatedChain& chain, const std::vector<double>& pi,
                        const std::function<double(const OccupancyState&)>& test_fn);

struct SweepRow {
  int B = 0;
  double pi_R0 = 0.0;
  double expected_qubits = 0.0;
  double aggregate_A = 0.0;
  double aggregate_B = 0.0;
  double boundary_mass = 0.0;
  double residual = 0.0;
  double error_estimate = 0.0;
};

// Requires strictly increasing caps.
std::vector<SweepRow> convergence_sweep(const SwitchParams& params, const std::vector<int>& caps, double tol = 1e-12,
                                        std::int64_t max_sweeps = 2'000'000);

}  // namespace entswitch::solve
