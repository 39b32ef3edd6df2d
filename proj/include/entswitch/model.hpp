#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "entswitch/error.hpp"

namespace entswitch {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Model parameters of the switch: k identical links, n-partite target states,
// per-link Bell-pair generation rate mu and swap success probability q.
class SwitchParams {
 public:
  // Throws InvalidParams unless 3 <= n <= k, mu > 0 and 0 <= q <= 1.
  SwitchParams(int k, int n, double mu = 1.0, double q = 1.0);

  int k() const noexcept { return k_; }
  int n() const noexcept { return n_; }
  double mu() const noexcept { return mu_; }
  double q() const noexcept { return q_; }

  // Dimension of the occupancy vector (n - 1).
  int dim() const noexcept { return n_ - 1; }
  bool stable() const noexcept { return k_ > n_; }

  friend bool operator==(const SwitchParams&, const SwitchParams&) = default;

 private:
  int k_;
  int n_;
  double mu_;
  double q_;
};

// Stored-qubit counts for the n - 1 tracked link slots.
class OccupancyState {
 public:
  OccupancyState() = default;
  explicit OccupancyState(std::vector<std::int64_t> x);
  OccupancyState(std::initializer_list<std::int64_t> x);

  // All-zero state of the given dimension.
  static OccupancyState zeros(int dim);

  std::size_t size() const noexcept { return x_.size(); }
  std::int64_t operator[](std::size_t i) const { return x_[i]; }
  std::span<const std::int64_t> values() const noexcept { return x_; }

  // |x|, the total number of stored qubits.
  std::int64_t total() const noexcept;
  int zero_count() const noexcept;
  int one_count() const noexcept;
  bool all_positive() const noexcept { return zero_count() == 0; }

  OccupancyState plus_unit(std::size_t slot) const;
  OccupancyState minus_ones() const;

  friend bool operator==(const OccupancyState&, const OccupancyState&) = default;
  friend auto operator<=>(const OccupancyState&, const OccupancyState&) = default;

 private:
  std::vector<std::int64_t> x_;
};

std::ostream& operator<<(std::ostream& os, const OccupancyState& s);
std::string to_string(const OccupancyState& s);

struct OccupancyStateHash {
  std::size_t operator()(const OccupancyState& s) const noexcept;
};

enum class WeightMode { Probability, Rate };

struct Transition {
  OccupancyState target;
  double weight;
};

struct TransitionList {
  std::vector<Transition> entries;
  WeightMode mode = WeightMode::Probability;

  double total() const noexcept;
  // Weight of the given target, or nullopt when it is not listed.
  std::optional<double> weight_of(const OccupancyState& target) const;
};

// Number of zero entries j, i.e. the index of the partition class R_j.
int classify(const OccupancyState& state);

// For a state with all entries >= 1, the number of entries equal to 1
// (0 means the state lies in the interior S - S*). Throws NotInS otherwise.
int classify_boundary(const OccupancyState& state);

// One-step kernel of the uniformized chain. Targets are listed decrement
// first, then arrivals in slot order 1..n-1; zero weights are omitted.
TransitionList dtmc_transitions(const SwitchParams& params, const OccupancyState& state);

// Same targets as dtmc_transitions with every weight multiplied by k*mu.
TransitionList ctmc_transitions(const SwitchParams& params, const OccupancyState& state);

// Exact kernel weights; used wherever drifts must be evaluated without rounding.
struct RationalTransition {
  OccupancyState target;
  Rational weight;
};
std::vector<RationalTransition> dtmc_transitions_exact(const SwitchParams& params,
                                                       const OccupancyState& state);

// True iff the step state -> target is the swap attempt out of R_0.
// Throws UnreachableTarget when target is not a one-step successor.
bool is_swap_transition(const SwitchParams& params, const OccupancyState& state,
                        const OccupancyState& target);

void validate_state(const SwitchParams& params, const OccupancyState& state);

}  // namespace entswitch
