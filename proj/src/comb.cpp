#include "entswitch/comb.hpp"

#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <tuple>

#include "entswitch/error.hpp"

namespace entswitch::comb {
namespace {

BigInt factorial(std::int64_t n) {
  BigInt f = 1;
  for (std::int64_t i = 2; i <= n; ++i) f *= i;
  return f;
}

BigInt binomial(std::int64_t n, std::int64_t r) {
  if (r < 0 || r > n) return 0;
  r = std::min(r, n - r);
  BigInt c = 1;
  for (std::int64_t i = 1; i <= r; ++i) {
    c *= n - r + i;
    c /= i;
  }
  return c;
}

BigInt pow_big(std::int64_t base, std::int64_t e) {
  BigInt p = 1;
  for (std::int64_t i = 0; i < e; ++i) p *= base;
  return p;
}

void check_kn(int k, int n) {
  if (n < 3) fail(ErrorKind::InvalidParams, "n must be at least 3");
  if (k < n) fail(ErrorKind::InvalidParams, "k must be at least n");
}

void check_stratum(int n, int j) {
  if (j < 1 || j > n - 1) fail(ErrorKind::IndexOutOfRange, "stratum j must lie in [1, n-1]");
}

void check_trunc(const SeriesTruncation& trunc) {
  if (trunc.max_total < 1) fail(ErrorKind::InvalidParams, "max_total must be at least 1");
  if (!(trunc.tail_tol > 0.0)) fail(ErrorKind::InvalidParams, "tail_tol must be positive");
  if (trunc.max_total > kMaxSeriesTotal) {
    fail(ErrorKind::InvalidParams, "max_total above " + std::to_string(kMaxSeriesTotal) + " is not supported");
  }
}

void require_tail(double tail, const SeriesTruncation& trunc, const char* what) {
  if (!(tail <= trunc.tail_tol)) {
    fail(ErrorKind::TailBoundViolated, std::string(what) + ": tail bound " + std::to_string(tail) +
                                           " exceeds tolerance at max_total " + std::to_string(trunc.max_total));
  }
}

double log_binomial(int n, int r) {
  const auto& lf = log_factorials(n);
  return lf[n] - lf[r] - lf[n - r];
}

// Depth-first walk over canonical E_j vectors with min_total <= |r| <= max_total.
class ReturnWalker {
 public:
  ReturnWalker(int k, int n, int j, int min_total, int max_total, const ReturnVisitor& visit)
      : dim_(n - 1), j_(j), min_total_(min_total), max_total_(max_total), visit_(visit),
        lf_(log_factorials(std::max(max_total, 1))), r_(static_cast<std::size_t>(n - 1), 0) {
    log_k_ = std::log(static_cast<double>(k));
    log_c_ = log_binomial(k - n + j + 1, k - n + 1);
  }

  void run() { descend(0, 0, 0.0, 0); }

 private:
  void descend(int slot, int total, double log_denominator, int ones) {
    if (slot == dim_) {
      if (ones == 0 || total < min_total_) return;
      const double lw = log_c_ + lf_[total - 1] - log_denominator - total * log_k_ + std::log(static_cast<double>(ones));
      visit_(r_, std::exp(lw));
      return;
    }
    const int remaining_slots = dim_ - slot - 1;
    const int lo = slot < j_ ? 1 : 0;
    // Later constrained slots still need at least one unit each.
    const int reserve = std::max(0, j_ - slot - 1);
    const int budget = max_total_ - total - reserve;
    for (int v = lo; v <= budget; ++v) {
      if (remaining_slots == 0 && total + v < min_total_) continue;
      r_[slot] = v;
      descend(slot + 1, total + v, log_denominator + lf_[v], ones + (slot < j_ && v == 1 ? 1 : 0));
    }
    r_[slot] = 0;
  }

  int dim_;
  int j_;
  int min_total_;
  int max_total_;
  const ReturnVisitor& visit_;
  const std::vector<double>& lf_;
  std::vector<int> r_;
  double log_k_ = 0.0;
  double log_c_ = 0.0;
};

// Coordinate sequence a(t) = k^-t g(t)^[weighted] [t >= 2]^[constrained] in
// exponential-generating-function form.
std::vector<long double> coordinate(int M, int k, bool constrained, const GKind* g) {
  std::vector<long double> a(static_cast<std::size_t>(M) + 1);
  const long double x = 1.0L / static_cast<long double>(k);
  long double p = 1.0L;
  for (int t = 0; t <= M; ++t) {
    long double v = (constrained && t < 2) ? 0.0L : p;
    if (g != nullptr) v *= static_cast<long double>(g_value(*g, t));
    a[t] = v;
    p *= x;
  }
  return a;
}

// sum_N (L + N)! / N! * b[N]
long double rising_weighted_sum(const std::vector<long double>& b, int L) {
  long double s = 0.0L;
  for (std::size_t N = 0; N < b.size(); ++N) {
    long double w = 1.0L;
    for (int i = 1; i <= L; ++i) w *= static_cast<long double>(N + i);
    s += w * b[N];
  }
  return s;
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace

double g_value(GKind g, std::int64_t i) {
  switch (g) {
    case GKind::One: return 1.0;
    case GKind::Identity: return static_cast<double>(i);
    case GKind::IdentityMinusOne: return static_cast<double>(i - 1);
  }
  return 0.0;
}

Rational g_value_exact(GKind g, std::int64_t i) {
  switch (g) {
    case GKind::One: return 1;
    case GKind::Identity: return i;
    case GKind::IdentityMinusOne: return i - 1;
  }
  return 0;
}

BigInt multinomial_paths(std::span<const std::int64_t> counts) {
  std::int64_t total = 0;
  for (auto c : counts) {
    if (c < 0) fail(ErrorKind::InvalidParams, "counts must be non-negative");
    total += c;
  }
  if (total == 0) fail(ErrorKind::AllZero, "at least one count must be positive");
  BigInt result = 1;
  std::int64_t running = 0;
  for (auto c : counts) {
    running += c;
    result *= binomial(running, c);
  }
  return result;
}

bool in_E(std::span<const std::int64_t> r, int j) {
  if (j < 1 || static_cast<std::size_t>(j) > r.size()) return false;
  bool has_one = false;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] < 0) return false;
    if (i < static_cast<std::size_t>(j)) {
      if (r[i] < 1) return false;
      if (r[i] == 1) has_one = true;
    }
  }
  return has_one;
}

Rational q_star_exact(int k, int n, int j, std::span<const std::int64_t> r) {
  check_kn(k, n);
  check_stratum(n, j);
  if (r.size() != static_cast<std::size_t>(n - 1)) fail(ErrorKind::InvalidParams, "return vector must have n-1 entries");
  if (!in_E(r, j)) fail(ErrorKind::NotInEj, "return vector is not in E_j");
  std::int64_t total = 0;
  int ones = 0;
  BigInt denominator = 1;
  for (std::size_t i = 0; i < r.size(); ++i) {
    total += r[i];
    denominator *= factorial(r[i]);
    if (i < static_cast<std::size_t>(j) && r[i] == 1) ++ones;
  }
  denominator *= pow_big(k, total);
  const BigInt numerator = binomial(k - n + j + 1, k - n + 1) * factorial(total - 1) * ones;
  return Rational(numerator, denominator);
}

double q_star(int k, int n, int j, std::span<const std::int64_t> r) {
  std::int64_t total = 0;
  for (auto v : r) total += v;
  if (total <= 150) return to_double(q_star_exact(k, n, j, r));
  check_kn(k, n);
  check_stratum(n, j);
  if (r.size() != static_cast<std::size_t>(n - 1)) fail(ErrorKind::InvalidParams, "return vector must have n-1 entries");
  if (!in_E(r, j)) fail(ErrorKind::NotInEj, "return vector is not in E_j");
  int ones = 0;
  double lw = log_binomial(k - n + j + 1, k - n + 1) + std::lgamma(static_cast<double>(total)) -
              static_cast<double>(total) * std::log(static_cast<double>(k));
  for (std::size_t i = 0; i < r.size(); ++i) {
    lw -= std::lgamma(static_cast<double>(r[i]) + 1.0);
    if (i < static_cast<std::size_t>(j) && r[i] == 1) ++ones;
  }
  return std::exp(lw + std::log(static_cast<double>(ones)));
}

double q_star(int k, int n, const ReturnVector& rv) { return q_star(k, n, rv.j, rv.r); }

void for_each_return(int k, int n, int j, int max_total, const ReturnVisitor& visit) {
  check_kn(k, n);
  check_stratum(n, j);
  if (max_total < 0) fail(ErrorKind::InvalidParams, "max_total must be non-negative");
  ReturnWalker(k, n, j, j, max_total, visit).run();
}

double return_tail_bound(int k, int n, int j, int max_total, int degree, double shift) {
  check_kn(k, n);
  check_stratum(n, j);
  const double scale = std::exp(log_binomial(k - n + j + 1, k - n + 1)) * j;
  const double rho = static_cast<double>(n - 1) / static_cast<double>(k);
  return scale * geometric_tail_bound(rho, degree, shift, max_total);
}

CertifiedValue q_star_normalization(int k, int n, int j, const SeriesTruncation& trunc) {
  check_trunc(trunc);
  const double tail = return_tail_bound(k, n, j, trunc.max_total);
  require_tail(tail, trunc, "q* normalization");
  double sum = 0.0;
  for_each_return(k, n, j, trunc.max_total, [&](std::span<const int>, double p) { sum += p; });
  return {sum, tail, trunc.max_total};
}

double sojourn_pmf(int k, int n, int j, int steps) {
  check_kn(k, n);
  check_stratum(n, j);
  if (steps < j) return 0.0;
  double sum = 0.0;
  ReturnWalker(k, n, j, steps, steps, [&](std::span<const int>, double p) { sum += p; }).run();
  return sum;
}

CertifiedValue sojourn_mean(int k, int n, int j, const SeriesTruncation& trunc) {
  check_trunc(trunc);
  const double tail = return_tail_bound(k, n, j, trunc.max_total, 1, 0.0);
  require_tail(tail, trunc, "sojourn mean");
  double mean = 0.0;
  for_each_return(k, n, j, trunc.max_total, [&](std::span<const int> r, double p) {
    mean += p * std::accumulate(r.begin(), r.end(), 0);
  });
  return {mean, tail, trunc.max_total};
}

CertifiedValue F_direct(GKind g, int m, int J, int L, int k, const SeriesTruncation& trunc) {
  check_trunc(trunc);
  if (J < 0 || L < 0 || m < 0 || m > J) fail(ErrorKind::InvalidParams, "F needs 0 <= m <= J and L >= 0");
  if (J == 0) {
    if (g != GKind::One) fail(ErrorKind::InvalidParams, "F with J = 0 is only defined for g = 1");
    return {to_double(Rational(factorial(L))), 0.0, trunc.max_total};
  }
  if (k <= J) fail(ErrorKind::DivergentRegime, "F diverges when k <= J");

  const int M = trunc.max_total;
  const double rho = static_cast<double>(J) / static_cast<double>(k);
  const int degree = L + (g == GKind::One ? 0 : 1);
  const double tail = geometric_tail_bound(rho, degree, L + 1.0, M);
  require_tail(tail, trunc, "F_m");

  std::vector<long double> acc = coordinate(M, k, m == J, &g);
  const std::vector<long double> free_coord = coordinate(M, k, false, nullptr);
  const std::vector<long double> constrained_coord = coordinate(M, k, true, nullptr);
  for (int i = 1; i < J; ++i) acc = binomial_convolve(acc, i <= m ? constrained_coord : free_coord);
  return {static_cast<double>(rising_weighted_sum(acc, L)), tail, M};
}

Rational F0_closed_exact(GKind g, int J, int L, int k) {
  if (J < 0 || L < 0) fail(ErrorKind::InvalidParams, "F_0 needs J >= 0 and L >= 0");
  if (J == 0 && g != GKind::One) fail(ErrorKind::InvalidParams, "F with J = 0 is only defined for g = 1");
  if (k <= J) fail(ErrorKind::DivergentRegime, "F diverges when k <= J");
  const BigInt kp = pow_big(k, L + 1);
  const std::int64_t gap = k - J;
  switch (g) {
    case GKind::One:
      return Rational(factorial(L) * kp, pow_big(gap, L + 1));
    case GKind::Identity:
      return Rational(factorial(L + 1) * kp, pow_big(gap, L + 2));
    case GKind::IdentityMinusOne:
      return Rational(-factorial(L) * kp * (gap - L - 1), pow_big(gap, L + 2));
  }
  return 0;
}

double F0_closed(GKind g, int J, int L, int k) { return to_double(F0_closed_exact(g, J, L, k)); }

Rational F_via_recursion_exact(GKind g, int m, int J, int L, int k) {
  if (m < 0 || L < 0 || m > J) fail(ErrorKind::InvalidParams, "F recursion needs 0 <= m <= J and L >= 0");
  if (m == J && m > 0 && g != GKind::One) fail(ErrorKind::RecursionDomain, "m = J is only admitted for g = 1");
  if (k <= J) fail(ErrorKind::DivergentRegime, "F diverges when k <= J");

  std::map<std::tuple<int, int, int>, Rational> memo;
  std::function<Rational(int, int, int)> rec = [&](int mm, int jj, int ll) -> Rational {
    if (mm == 0) return F0_closed_exact(g, jj, ll, k);
    const auto key = std::make_tuple(mm, jj, ll);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    Rational v = rec(mm - 1, jj, ll) - rec(mm - 1, jj - 1, ll) - rec(mm - 1, jj - 1, ll + 1) / k;
    memo.emplace(key, v);
    return v;
  };
  return rec(m, J, L);
}

double F_via_recursion(GKind g, int m, int J, int L, int k) { return to_double(F_via_recursion_exact(g, m, J, L, k)); }

namespace {

void check_G(GKind g, int a, int n, int m, int k) {
  if (a < -1) fail(ErrorKind::InvalidParams, "G needs a >= -1");
  if (n < 2) fail(ErrorKind::InvalidParams, "G needs n >= 2");
  const int m_max = g == GKind::One ? n - 1 : n - 2;
  if (m < 1 || m > m_max) fail(ErrorKind::InvalidParams, "G needs 1 <= m <= n-2 (n-1 for g = 1)");
  if (k <= n - 2) fail(ErrorKind::DivergentRegime, "G diverges when k <= n-2");
}

}  // namespace

CertifiedValue G_direct(GKind g, int a, int n, int m, int k, const SeriesTruncation& trunc) {
  check_G(g, a, n, m, k);
  long double value = 0.0L;
  double tail = 0.0;
  for (int l = 1; l <= m; ++l) {
    const double weight = to_double(Rational(binomial(m, l) * l, pow_big(k, l)));
    const CertifiedValue f = F_direct(g, m - l, n - l - 1, l + a, k, trunc);
    value += static_cast<long double>(weight) * f.value;
    tail += weight * f.tail_bound;
  }
  require_tail(tail, trunc, "G_m");
  return {static_cast<double>(value), tail, trunc.max_total};
}

Rational G_closed_exact(GKind g, int a, int n, int m, int k) {
  check_G(g, a, n, m, k);
  Rational s = 0;
  for (int l = 1; l <= m; ++l) {
    const Rational term = Rational(binomial(m, l) * l) * F0_closed_exact(g, n - l - 1, 1 + a, k);
    s += (l % 2 == 1) ? term : Rational(-term);
  }
  return s / k;
}

double G_closed(GKind g, int a, int n, int m, int k) { return to_double(G_closed_exact(g, a, n, m, k)); }

namespace {

int degree_of(std::span<const double> coeffs) {
  int d = -1;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] != 0.0) d = static_cast<int>(i);
  }
  return d;
}

}  // namespace

BigInt alternating_binomial_residual_exact(std::span<const BigInt> coeffs, int n) {
  if (n < 0) fail(ErrorKind::InvalidParams, "n must be non-negative");
  int d = -1;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] != 0) d = static_cast<int>(i);
  }
  if (d >= n) fail(ErrorKind::DegreeTooHigh, "polynomial degree must be below n");
  BigInt total = 0;
  for (int i = 0; i <= n; ++i) {
    BigInt p = 0;
    BigInt power = 1;
    for (int e = 0; e <= d; ++e) {
      p += coeffs[e] * power;
      power *= i;
    }
    const BigInt term = binomial(n, i) * p;
    if (i % 2 == 0) {
      total += term;
    } else {
      total -= term;
    }
  }
  return total;
}

double alternating_binomial_residual(std::span<const double> coeffs, int n) {
  if (n < 0) fail(ErrorKind::InvalidParams, "n must be non-negative");
  const int d = degree_of(coeffs);
  if (d >= n) fail(ErrorKind::DegreeTooHigh, "polynomial degree must be below n");
  bool integral = true;
  for (double c : coeffs) {
    if (!std::isfinite(c) || c != std::trunc(c) || std::fabs(c) > 9.0e15) integral = false;
  }
  if (integral) {
    std::vector<BigInt> exact;
    exact.reserve(coeffs.size());
    for (double c : coeffs) exact.emplace_back(static_cast<std::int64_t>(c));
    return alternating_binomial_residual_exact(exact, n).convert_to<double>();
  }
  long double total = 0.0L;
  for (int i = 0; i <= n; ++i) {
    long double p = 0.0L;
    for (int e = d; e >= 0; --e) p = p * i + coeffs[e];
    const long double term = binomial(n, i).convert_to<long double>() * p;
    total += (i % 2 == 0) ? term : -term;
  }
  return static_cast<double>(total);
}

double GeneratingResiduals::max() const noexcept {
  double m = 0.0;
  for (double r : residual) m = std::max(m, r);
  return m;
}

GeneratingResiduals generating_identity_residuals(int J, int L, double z, const SeriesTruncation& trunc) {
  check_trunc(trunc);
  if (J < 1 || L < 0) fail(ErrorKind::InvalidParams, "identities need J >= 1 and L >= 0");
  if (!(z >= 0.0)) fail(ErrorKind::InvalidParams, "z must be non-negative");
  const long double zl = z;
  const long double Jz = J * zl;
  if (Jz >= 1.0L) fail(ErrorKind::DivergentRegime, "series diverge when J z >= 1");

  const int M = trunc.max_total;
  const double tail = geometric_tail_bound(static_cast<double>(Jz), L + 2, L, M);
  require_tail(tail, trunc, "generating identities");

  const std::size_t len = static_cast<std::size_t>(M) + 1;
  std::vector<long double> plain(len), first(len), second(len);
  long double p = 1.0L;
  for (std::size_t t = 0; t < len; ++t) {
    plain[t] = p;
    first[t] = t * p;
    second[t] = static_cast<long double>(t) * t * p;
    p *= zl;
  }
  std::vector<long double> unit(len, 0.0L);
  unit[0] = 1.0L;

  // Product over J - 2 and J - 1 unweighted coordinates.
  std::vector<long double> rest_minus2 = unit;
  for (int i = 0; i + 2 < J; ++i) rest_minus2 = binomial_convolve(rest_minus2, plain);
  const std::vector<long double> rest = J >= 2 ? binomial_convolve(rest_minus2, plain) : unit;

  const long double s_plain = rising_weighted_sum(binomial_convolve(rest, plain), L);
  const long double s_first = rising_weighted_sum(binomial_convolve(rest, first), L);
  const long double s_second = rising_weighted_sum(binomial_convolve(rest, second), L);

  long double fact_L = 1.0L;
  for (int i = 2; i <= L; ++i) fact_L *= i;
  const long double gap = 1.0L - Jz;
  const long double rhs_plain = fact_L / std::pow(gap, L + 1);
  const long double rhs_first = fact_L * (L + 1) * zl / std::pow(gap, L + 2);
  const long double rhs_shift = fact_L * ((J + L + 1) * zl - 1.0L) / std::pow(gap, L + 2);
  const long double rhs_second = fact_L * (L + 1) * ((L + 2 - J) * zl + 1.0L) * zl / std::pow(gap, L + 3);

  GeneratingResiduals out;
  out.tail_bound = tail;
  out.residual[0] = static_cast<double>(std::fabs(s_plain - rhs_plain));
  out.residual[1] = static_cast<double>(std::fabs(s_first - rhs_first));
  out.residual[2] = static_cast<double>(std::fabs((s_first - s_plain) - rhs_shift));
  out.residual[3] = static_cast<double>(std::fabs(s_second - rhs_second));
  if (J >= 2) {
    const long double s_cross =
        rising_weighted_sum(binomial_convolve(binomial_convolve(rest_minus2, first), first), L);
    const long double rhs_cross = fact_L * (L + 1) * (L + 2) * zl * zl / std::pow(gap, L + 3);
    out.residual[4] = static_cast<double>(std::fabs(s_cross - rhs_cross));
  }
  return out;
}

SeriesTruncation truncation_for(double rho, int degree, double shift, double tol) {
  const int M = required_total(rho, degree, shift, 1.0, tol, kMaxSeriesTotal);
  if (M > kMaxSeriesTotal) fail(ErrorKind::TailBoundViolated, "no supported cut meets the tail tolerance");
  return SeriesTruncation(std::max(M, 1), tol);
}

}  // namespace entswitch::comb
