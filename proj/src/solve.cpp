#include "entswitch/solve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "entswitch/error.hpp"
#include "entswitch/simd/kernels.hpp"

namespace entswitch::solve {

std::size_t TruncatedChain::index_of(const OccupancyState& state) const {
  if (state.size() != static_cast<std::size_t>(dim_)) fail(ErrorKind::InvalidParams, "state has the wrong dimension");
  std::size_t idx = 0;
  std::size_t stride = 1;
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (state[i] < 0 || state[i] > B_) fail(ErrorKind::IndexOutOfRange, "state lies outside the truncated support");
    idx += static_cast<std::size_t>(state[i]) * stride;
    stride *= static_cast<std::size_t>(B_) + 1;
  }
  return idx;
}

OccupancyState TruncatedChain::state_at(std::size_t index) const {
  if (index >= states_) fail(ErrorKind::IndexOutOfRange, "state index out of range");
  std::vector<std::int64_t> x(static_cast<std::size_t>(dim_));
  for (auto& v : x) {
    v = static_cast<std::int64_t>(index % (static_cast<std::size_t>(B_) + 1));
    index /= static_cast<std::size_t>(B_) + 1;
  }
  return OccupancyState(std::move(x));
}

double TruncatedChain::row_sum(std::size_t index) const {
  double s = 0.0;
  for (auto e = row_ptr_[index]; e < row_ptr_[index + 1]; ++e) s += vals_[e];
  return s;
}

TruncatedChain build(const SwitchParams& params, int B) {
  const int k = params.k();
  const int n = params.n();
  if (k <= n) fail(ErrorKind::UnstableRegime, "unstable: k must exceed n");
  if (B < n) fail(ErrorKind::CapTooSmall, "cap B must be at least n");
  const int dim = params.dim();
  if (dim > 4 && B > 30) fail(ErrorKind::InvalidParams, "state space too large: n-1 > 4 needs B <= 30");

  const std::size_t base = static_cast<std::size_t>(B) + 1;
  std::size_t states = 1;
  for (int i = 0; i < dim; ++i) states *= base;
  if (states > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max())) {
    fail(ErrorKind::InvalidParams, "state space too large");
  }

  TruncatedChain chain(params);
  chain.B_ = B;
  chain.dim_ = dim;
  chain.states_ = states;
  chain.row_ptr_.assign(states + 1, 0);
  chain.cols_.reserve(states * static_cast<std::size_t>(n));
  chain.vals_.reserve(states * static_cast<std::size_t>(n));

  std::vector<std::size_t> stride(static_cast<std::size_t>(dim));
  stride[0] = 1;
  for (int i = 1; i < dim; ++i) stride[i] = stride[i - 1] * base;
  std::size_t down = 0;
  for (auto s : stride) down += s;

  std::vector<int> x(static_cast<std::size_t>(dim));
  const double kd = k;
  for (std::size_t s = 0; s < states; ++s) {
    std::size_t rest = s;
    int zeros = 0;
    for (auto& v : x) {
      v = static_cast<int>(rest % base);
      rest /= base;
      if (v == 0) ++zeros;
    }
    double self = 0.0;
    auto emit = [&](std::size_t target, double w) {
      chain.cols_.push_back(static_cast<std::int32_t>(target));
      chain.vals_.push_back(w);
    };
    if (zeros == dim) {
      for (int l = 0; l < dim; ++l) emit(s + stride[l], 1.0 / dim);
    } else {
      if (zeros == 0) emit(s - down, (kd - (n - 1)) / kd);
      const double fill = zeros > 0 ? (kd - (n - 1 - zeros)) / (kd * zeros) : 0.0;
      for (int l = 0; l < dim; ++l) {
        if (x[l] == 0) {
          emit(s + stride[l], fill);
        } else if (x[l] < B) {
          emit(s + stride[l], 1.0 / kd);
        } else {
          self += 1.0 / kd;
        }
      }
    }
    if (self > 0.0) emit(s, self);
    chain.row_ptr_[s + 1] = static_cast<std::int64_t>(chain.cols_.size());
  }

  // Transpose into ELL, padding short rows with zero weights on column 0.
  std::vector<std::size_t> indegree(states, 0);
  for (auto c : chain.cols_) ++indegree[static_cast<std::size_t>(c)];
  chain.ell_width_ = *std::max_element(indegree.begin(), indegree.end());
  chain.ell_cols_.assign(chain.ell_width_ * states, 0);
  chain.ell_vals_.assign(chain.ell_width_ * states, 0.0);
  std::vector<std::size_t> fill(states, 0);
  for (std::size_t s = 0; s < states; ++s) {
    for (auto e = chain.row_ptr_[s]; e < chain.row_ptr_[s + 1]; ++e) {
      const auto t = static_cast<std::size_t>(chain.cols_[e]);
      const std::size_t slot = fill[t]++ * states + t;
      chain.ell_cols_[slot] = static_cast<std::int32_t>(s);
      chain.ell_vals_[slot] = chain.vals_[e];
    }
  }
  return chain;
}

namespace {

void fill_aggregates(const TruncatedChain& chain, StationaryResult& r) {
  const std::size_t base = static_cast<std::size_t>(chain.cap()) + 1;
  const int dim = chain.dim();
  long double r0 = 0.0L, eq = 0.0L, A = 0.0L, Bsum = 0.0L, edge = 0.0L;
  for (std::size_t s = 0; s < chain.size(); ++s) {
    std::size_t rest = s;
    int zeros = 0;
    bool at_cap = false;
    long double total = 0.0L;
    for (int i = 0; i < dim; ++i) {
      const auto v = rest % base;
      rest /= base;
      total += static_cast<long double>(v);
      if (v == 0) ++zeros;
      if (v == base - 1) at_cap = true;
    }
    const long double p = r.pi[s];
    eq += p * total;
    if (zeros == 0) {
      r0 += p;
      A += p * total;
    } else if (zeros < dim) {
      Bsum += p * total;
    }
    if (at_cap) edge += p;
  }
  r.pi_R0 = static_cast<double>(r0);
  r.expected_qubits = static_cast<double>(eq);
  r.aggregate_A = static_cast<double>(A);
  r.aggregate_B = static_cast<double>(Bsum);
  r.boundary_mass = static_cast<double>(edge);
  r.B_used = chain.cap();
}

}  // namespace

StationaryResult stationary(const TruncatedChain& chain, double tol, std::int64_t max_sweeps) {
  if (!(tol > 0.0)) fail(ErrorKind::InvalidParams, "tol must be positive");
  const auto& kern = simd::kernels();
  const std::size_t n = chain.size();
  const simd::EllView ell{n, chain.ell_width(), chain.ell_cols().data(), chain.ell_vals().data()};

  StationaryResult r;
  r.pi.assign(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n);
  constexpr std::size_t kRateWindow = 32;
  std::vector<double> history(kRateWindow, 0.0);
  for (std::int64_t sweep = 0;; ++sweep) {
    kern.ell_spmv(ell, r.pi.data(), next.data());
    r.residual = kern.l1_distance(next.data(), r.pi.data(), n);
    r.sweeps = sweep;
    if (r.residual <= tol) {
      const auto span = static_cast<std::size_t>(std::min<std::int64_t>(sweep, kRateWindow - 1));
      const double past = history[(static_cast<std::size_t>(sweep) - span) % kRateWindow];
      double rate = span > 0 && past > 0.0 ? std::pow(r.residual / past, 1.0 / static_cast<double>(span)) : 0.0;
      r.error_estimate = rate < 1.0 ? 0.5 * r.residual / (1.0 - rate)
                                    : std::numeric_limits<double>::infinity();
      break;
    }
    history[static_cast<std::size_t>(sweep) % kRateWindow] = r.residual;
    if (sweep >= max_sweeps) {
      fail(ErrorKind::NoConvergence, "power iteration did not reach tol " + std::to_string(tol) + " in " +
                                         std::to_string(max_sweeps) + " sweeps (residual " +
                                         std::to_string(r.residual) + ")");
    }
    kern.average_into(r.pi.data(), next.data(), n);
    if (sweep % 64 == 63) kern.scale(r.pi.data(), 1.0 / kern.sum(r.pi.data(), n), n);
  }
  kern.scale(r.pi.data(), 1.0 / kern.sum(r.pi.data(), n), n);
  fill_aggregates(chain, r);
  return r;
}

double balance_residual(const TruncatedChain& chain, const std::vector<double>& pi,
                        const std::function<double(const OccupancyState&)>& test_fn) {
  if (pi.size() != chain.size()) fail(ErrorKind::InvalidParams, "pi does not match the chain");
  long double acc = 0.0L;
  for (std::size_t s = 0; s < chain.size(); ++s) {
    if (pi[s] == 0.0) continue;
    const OccupancyState x = chain.state_at(s);
    const double v0 = test_fn(x);
    long double drift = 0.0L;
    for (const auto& t : dtmc_transitions(chain.params(), x).entries) drift += t.weight * (test_fn(t.target) - v0);
    acc += pi[s] * drift;
  }
  return static_cast<double>(std::fabs(acc));
}

std::vector<SweepRow> convergence_sweep(const SwitchParams& params, const std::vector<int>& caps, double tol,
                                        std::int64_t max_sweeps) {
  for (std::size_t i = 1; i < caps.size(); ++i) {
    if (caps[i] <= caps[i - 1]) fail(ErrorKind::InvalidParams, "caps must be strictly increasing");
  }
  std::vector<SweepRow> rows;
  for (int B : caps) {
    const StationaryResult r = stationary(build(params, B), tol, max_sweeps);
    rows.push_back({B, r.pi_R0, r.expected_qubits, r.aggregate_A, r.aggregate_B, r.boundary_mass, r.residual,
                    r.error_estimate});
  }
  return rows;
}

}  // namespace entswitch::solve
