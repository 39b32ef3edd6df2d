#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "entswitch/model.hpp"
#include "entswitch/series.hpp"

namespace entswitch::comb {

// Weight applied to the last index of an F/G sum.
enum class GKind { One, Identity, IdentityMinusOne };

double g_value(GKind g, std::int64_t i);
Rational g_value_exact(GKind g, std::int64_t i);

// (sum counts)! / prod counts!. Throws AllZero when every count is 0.
BigInt multinomial_paths(std::span<const std::int64_t> counts);

// Return vector r of an excursion that left S through stratum S_j.
struct ReturnVector {
  std::vector<std::int64_t> r;
  int j = 0;
};

// r_i >= 1 for i < j, at least one of r_0..r_{j-1} equals 1, others >= 0.
bool in_E(std::span<const std::int64_t> r, int j);

// Probability that an excursion entered at a state of S_j re-enters S
// through x_j + r. Throws NotInEj.
double q_star(int k, int n, int j, std::span<const std::int64_t> r);
double q_star(int k, int n, const ReturnVector& rv);
Rational q_star_exact(int k, int n, int j, std::span<const std::int64_t> r);

// Visits every r in E_j with |r| <= max_total whose zero-constrained slots are
// 0..j-1, passing r and q*(r). Probabilities are computed in log space.
using ReturnVisitor = std::function<void(std::span<const int> r, double prob)>;
void for_each_return(int k, int n, int j, int max_total, const ReturnVisitor& visit);

// Upper bound on the q* mass of E_j beyond |r| = max_total, optionally
// weighted by (|r| + shift)^degree.
double return_tail_bound(int k, int n, int j, int max_total, int degree = 0, double shift = 0.0);

// Sum of q* over E_j up to the cut. Throws TailBoundViolated.
CertifiedValue q_star_normalization(int k, int n, int j, const SeriesTruncation& trunc);

// Probability that the excursion lasts exactly `steps` steps.
double sojourn_pmf(int k, int n, int j, int steps);
// Mean excursion length from the truncated pmf. Throws TailBoundViolated.
CertifiedValue sojourn_mean(int k, int n, int j, const SeriesTruncation& trunc);

// F_m(g; J, L) = sum over n in N^J with n_1..n_m >= 2 of
// (L + |n|)! / prod n_i! * k^-|n| * g(n_J).
CertifiedValue F_direct(GKind g, int m, int J, int L, int k, const SeriesTruncation& trunc);
Rational F0_closed_exact(GKind g, int J, int L, int k);
double F0_closed(GKind g, int J, int L, int k);
// Reduces m by one per level down to the m = 0 closed forms, exactly.
Rational F_via_recursion_exact(GKind g, int m, int J, int L, int k);
double F_via_recursion(GKind g, int m, int J, int L, int k);

// sum_{l=1}^{m} C(m,l) l k^-l F_{m-l}(g; n-l-1, l+a)
CertifiedValue G_direct(GKind g, int a, int n, int m, int k, const SeriesTruncation& trunc);
// (1/k) sum_{l=1}^{m} C(m,l) (-1)^{l+1} l F_0(g; n-l-1, 1+a)
Rational G_closed_exact(GKind g, int a, int n, int m, int k);
double G_closed(GKind g, int a, int n, int m, int k);

// sum_{i=0}^{n} C(n,i) (-1)^i P(i) for P given by ascending coefficients.
// Throws DegreeTooHigh when deg P >= n.
double alternating_binomial_residual(std::span<const double> coeffs, int n);
BigInt alternating_binomial_residual_exact(std::span<const BigInt> coeffs, int n);

// Truncated left-hand sides minus closed forms for the equal-argument
// generating identities, weighted by 1, n_J, n_J - 1, n_J^2 and n_I n_J.
struct GeneratingResiduals {
  std::array<double, 5> residual{};
  double tail_bound = 0.0;
  double max() const noexcept;
};
GeneratingResiduals generating_identity_residuals(int J, int L, double z, const SeriesTruncation& trunc);

// Smallest cut whose majorant sum_{N>M} (N + shift)^degree rho^N meets tol.
// Throws TailBoundViolated when no supported cut does.
SeriesTruncation truncation_for(double rho, int degree, double shift, double tol);

inline constexpr int kMaxSeriesTotal = 1000;

}  // namespace entswitch::comb
