#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "entswitch/comb.hpp"
#include "entswitch/model.hpp"
#include "entswitch/series.hpp"

namespace entswitch::lyapunov {

// V(x) = sum x_i^2 + b sum_{i<l} x_i x_l, with b = -2(1 - alpha)/(n - 2)
// on the certification path.
struct LyapunovConfig {
  double b = 0.0;
  std::optional<double> alpha;

  // Requires 0 < alpha < 1/(n-1).
  static LyapunovConfig from_alpha(int n, double alpha);
  // Requires b >= -2/(n-2).
  static LyapunovConfig from_b(int n, double b);
};

double V_value(const OccupancyState& state, const LyapunovConfig& config);
Rational V_exact(const OccupancyState& state, const Rational& b);

// One-step kernel of the chain observed on S. Boundary rows carry the
// re-entry law up to the cut; tail_bound bounds the omitted mass.
struct EmbeddedTransitions {
  TransitionList transitions;
  double tail_bound = 0.0;
};
EmbeddedTransitions embedded_transitions(const SwitchParams& params, const OccupancyState& state,
                                         const SeriesTruncation& trunc);

// Drift of V at interior states (no coordinate equal to 1). Throws NotInterior.
double drift_closed_interior(const SwitchParams& params, const LyapunovConfig& config, const OccupancyState& state);

// Slope of the boundary drift in the sum of the coordinates above 1, divided
// by k, for 1 <= j <= n-2. Throws IndexOutOfRange.
double drift_closed_boundary_coefficient(const SwitchParams& params, const LyapunovConfig& config, int j);

// The same slope times k, written in m = k - n and alpha.
double C_j_alpha_form(int k, int n, double alpha, int j);

// Constant terms of the boundary drift (times k): delta_j = gamma_j + b beta_j.
// Truncated sums over the re-entry law.
CertifiedValue gamma_j(const SwitchParams& params, int j, const SeriesTruncation& trunc);
CertifiedValue beta_j(const SwitchParams& params, int j, const SeriesTruncation& trunc);

// Exact first and second moments of the re-entry increment r for an
// excursion that starts with j empty slots. "zero" slots are the ones that
// were empty, "other" slots the remaining n-1-j.
struct ExcursionMoments {
  int j = 0;
  Rational zero;             // E r_s
  Rational other;            // E r_o
  Rational zero_sq;          // E r_s^2
  Rational other_sq;         // E r_o^2
  Rational zero_zero;        // E r_s r_t, s != t
  Rational zero_other;       // E r_s r_o
  Rational other_other;      // E r_o r_p, o != p
};
ExcursionMoments excursion_moments(int k, int n, int j);

// Exact drift of V at any state of S (interior states from the kernel,
// boundary states from the excursion moments).
Rational drift_exact(const SwitchParams& params, const Rational& b, const OccupancyState& state);

// delta_j, gamma_j and beta_j in exact arithmetic.
Rational delta_j_exact(const SwitchParams& params, const Rational& b, int j);
Rational gamma_j_exact(const SwitchParams& params, int j);
Rational beta_j_exact(const SwitchParams& params, int j);

// Bound on |gamma_j| built from the generating identities.
double gamma_j_majorant(int k, int n, int j);

struct DriftReport {
  OccupancyState state;
  double closed_form = 0.0;
  double empirical = 0.0;
  double truncation_tail = 0.0;
  double coefficient = 0.0;  // slope in |x| (interior) or in the non-unit sum (boundary)
  double delta_term = 0.0;   // constant term, divided by k
};

// Expected change of V by exhaustive enumeration of the embedded kernel.
DriftReport drift_empirical(const SwitchParams& params, const LyapunovConfig& config, const OccupancyState& state,
                            const SeriesTruncation& trunc);

double T_j_closed(int k, int n, int j);
// (j + 1) C(k-n+j+1, k-n) Gamma + 1
double T_j_from_Gamma(int k, int n, int j, double Gamma);

enum class GammaRoute { Enumeration, Series, Closed };
CertifiedValue Gamma_j(int k, int n, int j, GammaRoute route, const SeriesTruncation& trunc);
Rational Gamma_j_closed_exact(int k, int n, int j);

double W_j_closed(int k, int n, int j);
// Alternating-sum form, exact.
Rational W_j_alternating_exact(int k, int n, int j);
// Built from the truncated G_m sums.
CertifiedValue W_j_series(int k, int n, int j, const SeriesTruncation& trunc);

struct StratumCertificate {
  int j = 0;
  double coefficient = 0.0;  // C_j, times k
  double delta = 0.0;        // delta_j, times k
  double threshold = 0.0;    // drift < -eps once the coordinate sum exceeds this
};

struct DriftCertificate {
  double epsilon = 1e-6;
  double interior_coefficient = 0.0;  // times k
  double interior_constant = 0.0;     // times k
  double interior_threshold = 0.0;
  std::vector<StratumCertificate> strata;
  std::int64_t M = 0;
  std::optional<std::string> failure;
  bool ok() const noexcept { return !failure.has_value(); }
};

inline constexpr double kCertificationEpsilon = 1e-6;

// Evaluates every coefficient; records the first failure instead of throwing.
DriftCertificate evaluate_certificate(const SwitchParams& params, const LyapunovConfig& config,
                                      std::int64_t M_search_cap);
// Throws CertificationFailed with the offending stratum.
DriftCertificate certify_negative_drift(const SwitchParams& params, const LyapunovConfig& config,
                                        std::int64_t M_search_cap);

struct InstabilityReport {
  int k = 0;
  int n = 0;
  double downward_jump = 0.0;          // per coordinate, (k-n+1)/k
  double interior_total_drift = 0.0;   // -(n-1)(k-n)/k
  double interior_coordinate_drift = 0.0;
  double boundary_min_drift = 0.0;     // smallest per-coordinate drift over R_1..R_{n-1}
  bool interior_drift_zero = false;
  bool boundary_nonnegative = false;
  bool conditions_hold = false;
};
InstabilityReport instability_conditions(int k, int n);

}  // namespace entswitch::lyapunov
