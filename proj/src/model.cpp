#include "entswitch/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace entswitch {

SwitchParams::SwitchParams(int k, int n, double mu, double q) : k_(k), n_(n), mu_(mu), q_(q) {
  if (n < 3) fail(ErrorKind::InvalidParams, "n must be at least 3");
  if (k < n) fail(ErrorKind::InvalidParams, "k must be at least n");
  if (!(mu > 0.0) || !std::isfinite(mu)) fail(ErrorKind::InvalidParams, "mu must be positive");
  if (!(q >= 0.0 && q <= 1.0)) fail(ErrorKind::InvalidParams, "q must lie in [0, 1]");
}

OccupancyState::OccupancyState(std::vector<std::int64_t> x) : x_(std::move(x)) {
  for (auto v : x_) {
    if (v < 0) fail(ErrorKind::InvalidParams, "occupancy entries must be nonnegative");
  }
}

OccupancyState::OccupancyState(std::initializer_list<std::int64_t> x)
    : OccupancyState(std::vector<std::int64_t>(x)) {}

OccupancyState OccupancyState::zeros(int dim) {
  return OccupancyState(std::vector<std::int64_t>(static_cast<std::size_t>(dim), 0));
}

std::int64_t OccupancyState::total() const noexcept {
  std::int64_t s = 0;
  for (auto v : x_) s += v;
  return s;
}

int OccupancyState::zero_count() const noexcept {
  return static_cast<int>(std::count(x_.begin(), x_.end(), 0));
}

int OccupancyState::one_count() const noexcept {
  return static_cast<int>(std::count(x_.begin(), x_.end(), 1));
}

OccupancyState OccupancyState::plus_unit(std::size_t slot) const {
  OccupancyState out = *this;
  ++out.x_.at(slot);
  return out;
}

OccupancyState OccupancyState::minus_ones() const {
  OccupancyState out = *this;
  for (auto& v : out.x_) {
    if (v == 0) fail(ErrorKind::InvalidParams, "cannot decrement a zero entry");
    --v;
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const OccupancyState& s) {
  os << '(';
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) os << ',';
    os << s[i];
  }
  return os << ')';
}

std::string to_string(const OccupancyState& s) {
  std::ostringstream os;
  os << s;
  return os.str();
}

std::size_t OccupancyStateHash::operator()(const OccupancyState& s) const noexcept {
  std::size_t h = 0xcbf29ce484222325ull;
  for (auto v : s.values()) {
    h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

double TransitionList::total() const noexcept {
  double s = 0.0;
  for (const auto& e : entries) s += e.weight;
  return s;
}

std::optional<double> TransitionList::weight_of(const OccupancyState& target) const {
  for (const auto& e : entries) {
    if (e.target == target) return e.weight;
  }
  return std::nullopt;
}

int classify(const OccupancyState& state) { return state.zero_count(); }

int classify_boundary(const OccupancyState& state) {
  if (!state.all_positive()) fail(ErrorKind::NotInS, "state " + to_string(state) + " has a zero entry");
  return state.one_count();
}

void validate_state(const SwitchParams& params, const OccupancyState& state) {
  if (static_cast<int>(state.size()) != params.dim()) {
    fail(ErrorKind::InvalidParams, "state " + to_string(state) + " must have n-1 = " +
                                       std::to_string(params.dim()) + " entries");
  }
}

namespace {

// Literal transcription of the uniformized kernel. `ratio(a, b)` must return a/b.
template <typename Weight, typename Ratio, typename Emit>
void for_each_transition(const SwitchParams& params, const OccupancyState& state, Ratio ratio,
                         Emit emit) {
  validate_state(params, state);
  const int k = params.k();
  const int n = params.n();
  const int j = classify(state);
  const auto d = static_cast<std::size_t>(params.dim());

  if (j == 0) {
    emit(state.minus_ones(), ratio(k - (n - 1), k));
    for (std::size_t l = 0; l < d; ++l) emit(state.plus_unit(l), ratio(1, k));
    return;
  }
  if (j == n - 1) {
    for (std::size_t l = 0; l < d; ++l) emit(state.plus_unit(l), ratio(1, n - 1));
    return;
  }
  for (std::size_t l = 0; l < d; ++l) {
    if (state[l] == 0) {
      emit(state.plus_unit(l), ratio(k - (n - 1 - j), k * j));
    } else {
      emit(state.plus_unit(l), ratio(1, k));
    }
  }
}

}  // namespace

TransitionList dtmc_transitions(const SwitchParams& params, const OccupancyState& state) {
  TransitionList out;
  out.mode = WeightMode::Probability;
  out.entries.reserve(static_cast<std::size_t>(params.n()));
  for_each_transition<double>(
      params, state, [](long a, long b) { return static_cast<double>(a) / static_cast<double>(b); },
      [&](OccupancyState target, double w) {
        if (w > 0.0) out.entries.push_back({std::move(target), w});
      });
  return out;
}

TransitionList ctmc_transitions(const SwitchParams& params, const OccupancyState& state) {
  TransitionList out = dtmc_transitions(params, state);
  out.mode = WeightMode::Rate;
  const double total_rate = params.k() * params.mu();
  for (auto& e : out.entries) e.weight *= total_rate;
  return out;
}

std::vector<RationalTransition> dtmc_transitions_exact(const SwitchParams& params,
                                                       const OccupancyState& state) {
  std::vector<RationalTransition> out;
  for_each_transition<Rational>(
      params, state, [](long a, long b) { return Rational(a, b); },
      [&](OccupancyState target, Rational w) {
        if (w > 0) out.push_back({std::move(target), std::move(w)});
      });
  return out;
}

bool is_swap_transition(const SwitchParams& params, const OccupancyState& state,
                        const OccupancyState& target) {
  const auto row = dtmc_transitions(params, state);
  if (!row.weight_of(target)) {
    fail(ErrorKind::UnreachableTarget,
         to_string(target) + " is not a one-step successor of " + to_string(state));
  }
  return classify(state) == 0 && target.total() < state.total();
}

}  // namespace entswitch
