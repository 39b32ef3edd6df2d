#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace entswitch {

// Cut-off for infinite sums over an index total N, plus the bound the
// discarded tail must stay below.
struct SeriesTruncation {
  int max_total = 200;
  double tail_tol = 1e-12;

  SeriesTruncation() = default;
  SeriesTruncation(int max_total, double tail_tol);
};

// A truncated sum together with a rigorous bound on what was discarded.
struct CertifiedValue {
  double value = 0.0;
  double tail_bound = 0.0;
  int max_total = 0;
};

// Upper bound on sum_{N > M} (N + shift)^degree * rho^N, or +inf when the
// ratio test does not close at M. Requires 0 <= rho.
double geometric_tail_bound(double rho, int degree, double shift, int M);

// Smallest M <= cap with scale * geometric_tail_bound(rho, degree, shift, M)
// <= tol; returns cap + 1 when no such M exists.
int required_total(double rho, int degree, double shift, double scale, double tol, int cap = 4000);

// log(i!) for i = 0..max, accumulated as sums of logs.
const std::vector<double>& log_factorials(int max);

// Rows 0..max of Pascal's triangle in extended precision. Row N has N + 1
// entries.
class PascalTable {
 public:
  explicit PascalTable(int max_row);
  int max_row() const noexcept { return max_row_; }
  std::span<const long double> row(int N) const;

 private:
  int max_row_;
  std::vector<std::size_t> offsets_;
  std::vector<long double> data_;
};

// Shared table large enough for rows 0..max_row.
const PascalTable& pascal(int max_row);

// Binomial (exponential-generating-function) convolution truncated at
// index M = u.size() - 1: out[N] = sum_t C(N, t) u[t] v[N - t]. Extended
// precision keeps absolute errors near 1e-13 even when sums reach 1e6.
std::vector<long double> binomial_convolve(std::span<const long double> u, std::span<const long double> v);

}  // namespace entswitch
