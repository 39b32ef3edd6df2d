#include "entswitch/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "entswitch/error.hpp"

namespace entswitch::lyapunov {
namespace {

BigInt binom(std::int64_t n, std::int64_t r) {
  if (r < 0 || r > n) return 0;
  r = std::min(r, n - r);
  BigInt c = 1;
  for (std::int64_t i = 1; i <= r; ++i) {
    c *= n - r + i;
    c /= i;
  }
  return c;
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

void check_boundary_j(int n, int j) {
  if (j < 1 || j > n - 2) fail(ErrorKind::IndexOutOfRange, "boundary stratum j must lie in [1, n-2]");
}

void check_kn(int k, int n) {
  if (n < 3) fail(ErrorKind::InvalidParams, "n must be at least 3");
  if (k < n) fail(ErrorKind::InvalidParams, "k must be at least n");
}

// sum_{i=2}^{j+1} 1/(k-n+i)
Rational harmonic_part(int k, int n, int j) {
  Rational s = 0;
  for (int i = 2; i <= j + 1; ++i) s += Rational(1, k - n + i);
  return s;
}

template <typename T>
T V_of(std::span<const std::int64_t> x, const T& b) {
  T sq = 0;
  T sum = 0;
  for (auto v : x) {
    sq += T(v) * T(v);
    sum += T(v);
  }
  // sum_{i<l} x_i x_l = ((sum x)^2 - sum x^2) / 2
  return sq + b * (sum * sum - sq) / T(2);
}

void require_in_S(const OccupancyState& state) { (void)classify_boundary(state); }

void check_params_state(const SwitchParams& params, const OccupancyState& state) {
  validate_state(params, state);
  require_in_S(state);
}

struct SlotSplit {
  std::vector<int> ones;    // slots with x_i = 1
  std::vector<int> others;  // slots with x_i >= 2
};

SlotSplit split_slots(const OccupancyState& state) {
  SlotSplit s;
  for (std::size_t i = 0; i < state.size(); ++i) {
    (state[i] == 1 ? s.ones : s.others).push_back(static_cast<int>(i));
  }
  return s;
}

// Visits re-entry targets y = x - 1 + r of a boundary state with weight q*(r).
template <typename Fn>
void for_each_reentry(const SwitchParams& params, const OccupancyState& state, int max_total, Fn&& fn) {
  const SlotSplit split = split_slots(state);
  const int j = static_cast<int>(split.ones.size());
  std::vector<int> slot_of(state.size());
  for (int c = 0; c < j; ++c) slot_of[c] = split.ones[c];
  for (std::size_t c = 0; c < split.others.size(); ++c) slot_of[j + c] = split.others[c];
  std::vector<std::int64_t> y(state.size());
  comb::for_each_return(params.k(), params.n(), j, max_total, [&](std::span<const int> r, double p) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      const int slot = slot_of[c];
      y[slot] = state[slot] - 1 + r[c];
    }
    fn(std::span<const std::int64_t>(y), p);
  });
}

double reentry_tail(const SwitchParams& params, int j, int max_total, int degree, double shift) {
  const double swap = static_cast<double>(params.k() - params.n() + 1) / params.k();
  return swap * comb::return_tail_bound(params.k(), params.n(), j, max_total, degree, shift);
}

}  // namespace

LyapunovConfig LyapunovConfig::from_alpha(int n, double alpha) {
  if (n < 3) fail(ErrorKind::InvalidParams, "n must be at least 3");
  if (!(alpha > 0.0 && alpha < 1.0 / (n - 1))) fail(ErrorKind::InvalidParams, "alpha must lie in (0, 1/(n-1))");
  return LyapunovConfig{-2.0 * (1.0 - alpha) / (n - 2), alpha};
}

LyapunovConfig LyapunovConfig::from_b(int n, double b) {
  if (n < 3) fail(ErrorKind::InvalidParams, "n must be at least 3");
  if (!std::isfinite(b) || b < -2.0 / (n - 2)) fail(ErrorKind::InvalidParams, "b must be at least -2/(n-2)");
  return LyapunovConfig{b, std::nullopt};
}

double V_value(const OccupancyState& state, const LyapunovConfig& config) {
  return V_of<long double>(state.values(), static_cast<long double>(config.b));
}

Rational V_exact(const OccupancyState& state, const Rational& b) { return V_of<Rational>(state.values(), b); }

EmbeddedTransitions embedded_transitions(const SwitchParams& params, const OccupancyState& state,
                                         const SeriesTruncation& trunc) {
  check_params_state(params, state);
  const int k = params.k();
  const int j = classify_boundary(state);
  const double swap = static_cast<double>(k - params.n() + 1) / k;

  std::unordered_map<OccupancyState, double, OccupancyStateHash> merged;
  std::vector<OccupancyState> order;
  auto add = [&](OccupancyState target, double w) {
    auto [it, inserted] = merged.try_emplace(target, 0.0);
    if (inserted) order.push_back(std::move(target));
    it->second += w;
  };

  EmbeddedTransitions out;
  if (j == 0) {
    add(state.minus_ones(), swap);
  } else {
    if (trunc.max_total < 1) fail(ErrorKind::InvalidParams, "max_total must be at least 1");
    out.tail_bound = reentry_tail(params, j, trunc.max_total, 0, 0.0);
    if (!(out.tail_bound <= trunc.tail_tol)) {
      fail(ErrorKind::TailBoundViolated, "re-entry tail exceeds tolerance at max_total " + std::to_string(trunc.max_total));
    }
    for_each_reentry(params, state, trunc.max_total, [&](std::span<const std::int64_t> y, double p) {
      add(OccupancyState(std::vector<std::int64_t>(y.begin(), y.end())), swap * p);
    });
  }
  for (std::size_t l = 0; l < state.size(); ++l) add(state.plus_unit(l), 1.0 / k);

  out.transitions.mode = WeightMode::Probability;
  out.transitions.entries.reserve(order.size());
  for (auto& target : order) {
    const double w = merged.at(target);
    out.transitions.entries.push_back({std::move(target), w});
  }
  return out;
}

double drift_closed_interior(const SwitchParams& params, const LyapunovConfig& config, const OccupancyState& state) {
  validate_state(params, state);
  if (classify_boundary(state) != 0) fail(ErrorKind::NotInterior, "state has a coordinate equal to 1");
  const double k = params.k();
  const double n = params.n();
  const double b = config.b;
  const double total = static_cast<double>(state.total());
  return (-(k - n) * (2.0 + b * (n - 2.0)) * total + (n - 1.0) * (k - n + 2.0 + b * (k - n + 1.0) * (n - 2.0) / 2.0)) / k;
}

double drift_closed_boundary_coefficient(const SwitchParams& params, const LyapunovConfig& config, int j) {
  check_boundary_j(params.n(), j);
  const double k = params.k();
  const double n = params.n();
  const double b = config.b;
  const double h = to_double(harmonic_part(params.k(), params.n(), j));
  return ((k - n + 1.0) * (2.0 + b * (k - 1.0)) * h - (k - n) * (2.0 + b * (n - 2.0))) / k;
}

double C_j_alpha_form(int k, int n, double alpha, int j) {
  check_kn(k, n);
  check_boundary_j(n, j);
  const double m = k - n;
  const double h = to_double(harmonic_part(k, n, j));
  return -(2.0 / (n - 2)) * ((m + 1.0) * (m + 1.0) - alpha * (m * m + m * n + n - 1.0)) * h - 2.0 * m * alpha;
}

CertifiedValue gamma_j(const SwitchParams& params, int j, const SeriesTruncation& trunc) {
  const int n = params.n();
  check_boundary_j(n, j);
  const double swap = params.k() - n + 1;
  const double tail = swap * comb::return_tail_bound(params.k(), n, j, trunc.max_total, 2, 2.0 * n);
  if (!(tail <= trunc.tail_tol)) fail(ErrorKind::TailBoundViolated, "gamma_j tail exceeds tolerance");
  long double acc = 0.0L;
  comb::for_each_return(params.k(), n, j, trunc.max_total, [&](std::span<const int> r, double p) {
    long double w = n - 1 - 2 * j;
    for (std::size_t i = 0; i < r.size(); ++i) {
      w += static_cast<long double>(r[i]) * r[i];
      if (static_cast<int>(i) >= j) w -= 2.0L * r[i];
    }
    acc += p * w;
  });
  return {static_cast<double>(swap * acc + (n - 1 + 2 * j)), tail, trunc.max_total};
}

CertifiedValue beta_j(const SwitchParams& params, int j, const SeriesTruncation& trunc) {
  const int n = params.n();
  check_boundary_j(n, j);
  const double swap = params.k() - n + 1;
  const double tail = 2.0 * swap * comb::return_tail_bound(params.k(), n, j, trunc.max_total, 2, 2.0 * n);
  if (!(tail <= trunc.tail_tol)) fail(ErrorKind::TailBoundViolated, "beta_j tail exceeds tolerance");
  const int dim = n - 1;
  long double acc = 0.0L;
  comb::for_each_return(params.k(), n, j, trunc.max_total, [&](std::span<const int> r, double p) {
    long double alpha = 0.0L;
    long double suffix = 0.0L;
    for (int i = dim - 1; i >= 0; --i) {
      if (i < j) alpha += static_cast<long double>(r[i]) * (suffix - (n - j - 1));
      suffix += r[i];
    }
    for (int i = j; i < dim; ++i) {
      for (int l = i + 1; l < dim; ++l) alpha += static_cast<long double>(r[i] - 1) * (r[l] - 1);
    }
    acc += p * (alpha - (static_cast<long double>(j) * j - j) / 2.0L);
  });
  return {static_cast<double>(swap * acc + (n - 2) * j), tail, trunc.max_total};
}

ExcursionMoments excursion_moments(int k, int n, int j) {
  check_kn(k, n);
  if (j < 1 || j > n - 1) fail(ErrorKind::IndexOutOfRange, "stratum j must lie in [1, n-1]");
  // Phase p (p = j..1) runs while p slots are still empty. It places a
  // geometric number G_p of units uniformly on the m_p = n-1-p filled slots
  // and ends when an empty slot, chosen uniformly, is filled.
  struct Phase {
    int u;          // slots of the initially empty set already filled
    Rational mean;  // E G_p / m_p
    Rational fact;  // E G_p (G_p - 1) / m_p^2
  };
  std::vector<Phase> phases;
  for (int p = j; p >= 1; --p) {
    const int m = n - 1 - p;
    if (m == 0) continue;
    const Rational P(k - n + 1 + p, k);
    const Rational EG = (1 - P) / P;
    const Rational EGG = 2 * (1 - P) * (1 - P) / (P * P);
    phases.push_back({j - p, EG / m, EGG / (m * m)});
  }
  const Rational jj = j;
  auto single = [&](int u) { return Rational(u) / jj; };
  auto pair = [&](int u, int v) {
    if (j < 2) return Rational(0);
    return Rational(std::min(u, v) * (std::max(u, v) - 1), j * (j - 1));
  };

  ExcursionMoments mom;
  mom.j = j;
  Rational ex_zero = 0, ex_other = 0;
  Rational sq_zero = 0, sq_other = 0, zz = 0, zo = 0, oo = 0;
  for (std::size_t a = 0; a < phases.size(); ++a) {
    const Phase& pa = phases[a];
    const Rational act = single(pa.u);
    ex_zero += act * pa.mean;
    ex_other += pa.mean;
    sq_zero += act * (pa.mean + pa.fact);
    sq_other += pa.mean + pa.fact;
    zz += pair(pa.u, pa.u) * pa.fact;
    zo += act * pa.fact;
    oo += pa.fact;
    for (std::size_t c = 0; c < phases.size(); ++c) {
      if (c == a) continue;
      const Phase& pc = phases[c];
      const Rational prod = pa.mean * pc.mean;
      sq_zero += single(std::min(pa.u, pc.u)) * prod;
      sq_other += prod;
      zz += pair(pa.u, pc.u) * prod;
      zo += act * prod;
      oo += prod;
    }
  }
  // Empty slots also receive the unit that fills them.
  mom.zero = 1 + ex_zero;
  mom.other = ex_other;
  mom.zero_sq = 1 + 2 * ex_zero + sq_zero;
  mom.other_sq = sq_other;
  mom.zero_zero = 1 + 2 * ex_zero + zz;
  mom.zero_other = ex_other + zo;
  mom.other_other = oo;
  return mom;
}

Rational drift_exact(const SwitchParams& params, const Rational& b, const OccupancyState& state) {
  check_params_state(params, state);
  const int k = params.k();
  const Rational V0 = V_exact(state, b);
  Rational arrivals = 0;
  for (std::size_t l = 0; l < state.size(); ++l) arrivals += V_exact(state.plus_unit(l), b) - V0;
  const Rational swap(k - params.n() + 1, k);
  const int j = classify_boundary(state);
  if (j == 0) return arrivals / k + swap * (V_exact(state.minus_ones(), b) - V0);

  const ExcursionMoments mom = excursion_moments(k, params.n(), j);
  const std::size_t dim = state.size();
  std::vector<bool> is_zero(dim);
  std::vector<Rational> c(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    is_zero[i] = state[i] == 1;
    c[i] = state[i] - 1;
  }
  auto first = [&](std::size_t i) { return is_zero[i] ? mom.zero : mom.other; };
  auto cross = [&](std::size_t i, std::size_t l) {
    if (is_zero[i] && is_zero[l]) return mom.zero_zero;
    if (!is_zero[i] && !is_zero[l]) return mom.other_other;
    return mom.zero_other;
  };
  Rational EV = 0;
  for (std::size_t i = 0; i < dim; ++i) {
    EV += c[i] * c[i] + 2 * c[i] * first(i) + (is_zero[i] ? mom.zero_sq : mom.other_sq);
    for (std::size_t l = i + 1; l < dim; ++l) {
      EV += b * (c[i] * c[l] + c[i] * first(l) + c[l] * first(i) + cross(i, l));
    }
  }
  return arrivals / k + swap * (EV - V0);
}

Rational delta_j_exact(const SwitchParams& params, const Rational& b, int j) {
  const int k = params.k();
  const int n = params.n();
  check_boundary_j(n, j);
  std::vector<std::int64_t> x(static_cast<std::size_t>(n - 1), 2);
  for (int i = 0; i < j; ++i) x[i] = 1;
  const OccupancyState state(x);
  const Rational h = harmonic_part(k, n, j);
  const Rational slope = (k - n + 1) * (2 + b * (k - 1)) * h - (k - n) * (2 + b * (n - 2));
  return k * drift_exact(params, b, state) - slope * Rational(2 * (n - 1 - j));
}

Rational gamma_j_exact(const SwitchParams& params, int j) { return delta_j_exact(params, 0, j); }

Rational beta_j_exact(const SwitchParams& params, int j) {
  return delta_j_exact(params, 1, j) - delta_j_exact(params, 0, j);
}

double gamma_j_majorant(int k, int n, int j) {
  check_kn(k, n);
  check_boundary_j(n, j);
  const double kk = k;
  const double g = k - n + 1;
  const double c = to_double(Rational(binom(k - n + j + 1, k - n)));
  return (n - 1) * j * (j + 1) * c * (kk / g + 2.0 * kk / (g * g) + (k - n + 3) * kk / (g * g * g)) + n - 1 + 2 * j;
}

DriftReport drift_empirical(const SwitchParams& params, const LyapunovConfig& config, const OccupancyState& state,
                            const SeriesTruncation& trunc) {
  check_params_state(params, state);
  const int k = params.k();
  const int n = params.n();
  const int j = classify_boundary(state);
  const Rational b_exact(config.b);

  DriftReport report;
  report.state = state;
  if (j == 0) {
    // No truncation: every transition is listed, so evaluate exactly.
    const EmbeddedTransitions et = embedded_transitions(params, state, trunc);
    const Rational V0 = V_exact(state, b_exact);
    Rational drift = 0;
    const Rational swap(k - n + 1, k);
    for (const auto& t : et.transitions.entries) {
      const Rational w = t.target.total() < state.total() ? swap : Rational(1, k);
      drift += w * (V_exact(t.target, b_exact) - V0);
    }
    report.empirical = to_double(drift);
    report.closed_form = drift_closed_interior(params, config, state);
    report.coefficient = -(k - n) * (2.0 + config.b * (n - 2)) / k;
    report.delta_term = (n - 1) * (k - n + 2 + config.b * (k - n + 1) * (n - 2) / 2.0) / k;
    return report;
  }

  if (trunc.max_total < 1) fail(ErrorKind::InvalidParams, "max_total must be at least 1");
  const long double b = config.b;
  const long double V0 = V_of<long double>(state.values(), b);
  long double arrivals = 0.0L;
  for (std::size_t l = 0; l < state.size(); ++l) arrivals += V_of<long double>(state.plus_unit(l).values(), b) - V0;
  long double reentry = 0.0L;
  for_each_reentry(params, state, trunc.max_total, [&](std::span<const std::int64_t> y, double p) {
    reentry += p * (V_of<long double>(y, b) - V0);
  });
  const long double swap = static_cast<long double>(k - n + 1) / k;
  report.empirical = static_cast<double>(arrivals / k + swap * reentry);
  report.truncation_tail = reentry_tail(params, j, trunc.max_total, 2, static_cast<double>(state.total())) *
                           (2.0 + std::fabs(config.b));
  if (!(report.truncation_tail <= trunc.tail_tol)) {
    fail(ErrorKind::TailBoundViolated, "drift tail exceeds tolerance at max_total " + std::to_string(trunc.max_total));
  }

  const std::int64_t upper = state.total() - j;
  if (j <= n - 2) {
    report.coefficient = drift_closed_boundary_coefficient(params, config, j);
    report.delta_term = to_double(delta_j_exact(params, b_exact, j)) / k;
    report.closed_form = report.coefficient * static_cast<double>(upper) + report.delta_term;
  } else {
    report.coefficient = 0.0;
    report.delta_term = to_double(drift_exact(params, b_exact, state));
    report.closed_form = report.delta_term;
  }
  return report;
}

double T_j_closed(int k, int n, int j) {
  check_kn(k, n);
  check_boundary_j(n, j);
  return to_double(-(k - n) + (k - n + 1) * harmonic_part(k, n, j));
}

double T_j_from_Gamma(int k, int n, int j, double Gamma) {
  check_kn(k, n);
  check_boundary_j(n, j);
  return (j + 1) * to_double(Rational(binom(k - n + j + 1, k - n))) * Gamma + 1.0;
}

Rational Gamma_j_closed_exact(int k, int n, int j) {
  check_kn(k, n);
  check_boundary_j(n, j);
  Rational s = 0;
  for (int l = 1; l <= j; ++l) {
    const int d = k - n + l + 1;
    const Rational term = Rational(binom(j, l) * l * (k - n + l), d * d);
    s += (l % 2 == 0) ? term : Rational(-term);
  }
  return s;
}

CertifiedValue Gamma_j(int k, int n, int j, GammaRoute route, const SeriesTruncation& trunc) {
  check_kn(k, n);
  check_boundary_j(n, j);
  switch (route) {
    case GammaRoute::Closed:
      return {to_double(Gamma_j_closed_exact(k, n, j)), 0.0, 0};
    case GammaRoute::Enumeration: {
      const double scale = to_double(Rational(binom(k - n + j + 1, k - n + 1)));
      const double tail = comb::return_tail_bound(k, n, j, trunc.max_total, 1, 1.0) / scale;
      if (!(tail <= trunc.tail_tol)) fail(ErrorKind::TailBoundViolated, "Gamma_j tail exceeds tolerance");
      long double acc = 0.0L;
      comb::for_each_return(k, n, j, trunc.max_total, [&](std::span<const int> r, double p) {
        acc += p * static_cast<long double>(r.back() - 1);
      });
      return {static_cast<double>(acc / scale), tail, trunc.max_total};
    }
    case GammaRoute::Series: {
      long double acc = 0.0L;
      double tail = 0.0;
      for (int l = 1; l <= j; ++l) {
        const double w = to_double(Rational(binom(j, l) * l, boost::multiprecision::pow(BigInt(k), l)));
        const CertifiedValue f = comb::F_direct(comb::GKind::IdentityMinusOne, j - l, n - l - 1, l - 1, k, trunc);
        acc += static_cast<long double>(w) * f.value;
        tail += w * f.tail_bound;
      }
      return {static_cast<double>(acc), tail, trunc.max_total};
    }
  }
  return {};
}

double W_j_closed(int k, int n, int j) {
  check_kn(k, n);
  check_boundary_j(n, j);
  return to_double((k - 1) * (k - n + 1) * harmonic_part(k, n, j) - (n - 2) * (k - n));
}

Rational W_j_alternating_exact(int k, int n, int j) {
  check_kn(k, n);
  check_boundary_j(n, j);
  Rational s = 0;
  for (int l = 1; l <= j; ++l) {
    const int d = k - n + l + 1;
    const Rational term = Rational(binom(j, l) * l * (k - 1 - (n - 2) * d), d * d);
    s += (l % 2 == 1) ? term : Rational(-term);
  }
  return Rational((j + 1) * binom(k - n + j + 1, k - n)) * s + (n - 2);
}

CertifiedValue W_j_series(int k, int n, int j, const SeriesTruncation& trunc) {
  check_kn(k, n);
  check_boundary_j(n, j);
  using comb::GKind;
  const CertifiedValue w1 = comb::G_direct(GKind::One, 0, n, j, k, trunc);
  const CertifiedValue w2 = comb::G_direct(GKind::Identity, -1, n, j, k, trunc);
  const CertifiedValue w3 = comb::G_direct(GKind::One, -1, n, j, k, trunc);
  const double rho = (j + 1) * to_double(Rational(binom(k - n + j + 1, k - n)));
  const long double inner = static_cast<long double>(w1.value) - w2.value - static_cast<long double>(n - 2) * w3.value;
  const double tail = rho * (w1.tail_bound + w2.tail_bound + (n - 2) * w3.tail_bound);
  return {static_cast<double>(rho * inner + (n - 2)), tail, trunc.max_total};
}

DriftCertificate evaluate_certificate(const SwitchParams& params, const LyapunovConfig& config,
                                      std::int64_t M_search_cap) {
  const int k = params.k();
  const int n = params.n();
  if (!config.alpha || !(*config.alpha > 0.0 && *config.alpha < 1.0 / (n - 1))) {
    fail(ErrorKind::InvalidParams, "certification needs alpha in (0, 1/(n-1))");
  }
  DriftCertificate cert;
  cert.epsilon = kCertificationEpsilon;
  const double eps_k = cert.epsilon * k;
  const Rational b(config.b);

  cert.interior_coefficient = -(k - n) * (2.0 + config.b * (n - 2));
  cert.interior_constant = (n - 1) * (k - n + 2 + config.b * (k - n + 1) * (n - 2) / 2.0);
  if (!(cert.interior_coefficient < 0.0)) {
    cert.failure = "interior: |x| coefficient " + std::to_string(cert.interior_coefficient) + " is not negative";
    return cert;
  }
  cert.interior_threshold = (cert.interior_constant + eps_k) / -cert.interior_coefficient;
  double M = std::max(cert.interior_threshold, static_cast<double>(n - 1));

  for (int j = 1; j <= n - 2; ++j) {
    StratumCertificate s;
    s.j = j;
    s.coefficient = drift_closed_boundary_coefficient(params, config, j) * k;
    s.delta = to_double(delta_j_exact(params, b, j));
    if (!(s.coefficient < 0.0)) {
      cert.strata.push_back(s);
      cert.failure = "stratum j=" + std::to_string(j) + ": coefficient " + std::to_string(s.coefficient) +
                     " is not negative";
      return cert;
    }
    s.threshold = j + (s.delta + eps_k) / -s.coefficient;
    M = std::max(M, s.threshold);
    cert.strata.push_back(s);
  }
  if (!(M < static_cast<double>(M_search_cap))) {
    cert.failure = "threshold " + std::to_string(M) + " exceeds search cap " + std::to_string(M_search_cap);
    return cert;
  }
  cert.M = static_cast<std::int64_t>(std::ceil(M));
  return cert;
}

DriftCertificate certify_negative_drift(const SwitchParams& params, const LyapunovConfig& config,
                                        std::int64_t M_search_cap) {
  DriftCertificate cert = evaluate_certificate(params, config, M_search_cap);
  if (!cert.ok()) fail(ErrorKind::CertificationFailed, *cert.failure);
  return cert;
}

InstabilityReport instability_conditions(int k, int n) {
  check_kn(k, n);
  const SwitchParams params(k, n);
  InstabilityReport rep;
  rep.k = k;
  rep.n = n;
  const int dim = n - 1;

  // Interior representative: every coordinate at 2.
  const OccupancyState interior(std::vector<std::int64_t>(static_cast<std::size_t>(dim), 2));
  Rational total = 0;
  Rational coord0 = 0;
  Rational down = 0;
  for (const auto& t : dtmc_transitions_exact(params, interior)) {
    total += t.weight * Rational(t.target.total() - interior.total());
    const std::int64_t d0 = t.target[0] - interior[0];
    coord0 += t.weight * d0;
    if (d0 < 0) down += t.weight * Rational(-d0);
  }
  rep.downward_jump = to_double(down);
  rep.interior_total_drift = to_double(total);
  rep.interior_coordinate_drift = to_double(coord0);
  rep.interior_drift_zero = total == 0;

  // Boundary strata R_1..R_{n-1}: zeros in the leading slots, 2 elsewhere.
  Rational min_drift = std::numeric_limits<std::int64_t>::max();
  for (int j = 1; j <= dim; ++j) {
    std::vector<std::int64_t> x(static_cast<std::size_t>(dim), 2);
    for (int i = 0; i < j; ++i) x[i] = 0;
    const OccupancyState state(x);
    const auto rows = dtmc_transitions_exact(params, state);
    for (int i = 0; i < dim; ++i) {
      Rational d = 0;
      for (const auto& t : rows) d += t.weight * Rational(t.target[i] - state[i]);
      min_drift = std::min(min_drift, d);
    }
  }
  rep.boundary_min_drift = to_double(min_drift);
  rep.boundary_nonnegative = min_drift >= 0;
  rep.conditions_hold = rep.interior_drift_zero && rep.boundary_nonnegative;
  return rep;
}

}  // namespace entswitch::lyapunov
