#include "entswitch/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>

#include "entswitch/error.hpp"

namespace entswitch {

SeriesTruncation::SeriesTruncation(int max_total_, double tail_tol_) : max_total(max_total_), tail_tol(tail_tol_) {
  if (max_total < 0) fail(ErrorKind::InvalidParams, "max_total must be non-negative");
  if (!(tail_tol > 0.0)) fail(ErrorKind::InvalidParams, "tail_tol must be positive");
}

double geometric_tail_bound(double rho, int degree, double shift, int M) {
  if (rho < 0.0 || degree < 0) fail(ErrorKind::InvalidParams, "tail bound needs rho >= 0 and degree >= 0");
  if (rho == 0.0) return 0.0;
  if (rho >= 1.0) return std::numeric_limits<double>::infinity();
  const double first = static_cast<double>(M) + 1.0 + shift;
  if (first <= 0.0) return std::numeric_limits<double>::infinity();
  // t(N) = (N + shift)^degree rho^N has a ratio t(N+1)/t(N) that decreases in N.
  const double ratio = std::pow((first + 1.0) / first, degree) * rho;
  if (ratio >= 1.0) return std::numeric_limits<double>::infinity();
  const double log_first = degree * std::log(first) + (static_cast<double>(M) + 1.0) * std::log(rho);
  return std::exp(log_first) / (1.0 - ratio);
}

int required_total(double rho, int degree, double shift, double scale, double tol, int cap) {
  for (int M = 0; M <= cap; ++M) {
    if (scale * geometric_tail_bound(rho, degree, shift, M) <= tol) return M;
  }
  return cap + 1;
}

const std::vector<double>& log_factorials(int max) {
  static std::mutex mu;
  static std::vector<double> table{0.0};
  std::lock_guard lock(mu);
  if (static_cast<int>(table.size()) <= max) {
    int i = static_cast<int>(table.size());
    table.resize(static_cast<std::size_t>(max) + 1);
    for (; i <= max; ++i) table[i] = table[i - 1] + std::log(static_cast<double>(i));
  }
  return table;
}

PascalTable::PascalTable(int max_row) : max_row_(max_row) {
  if (max_row < 0) fail(ErrorKind::InvalidParams, "Pascal table needs max_row >= 0");
  offsets_.resize(static_cast<std::size_t>(max_row) + 2);
  offsets_[0] = 0;
  for (int N = 0; N <= max_row; ++N) offsets_[N + 1] = offsets_[N] + static_cast<std::size_t>(N) + 1;
  data_.resize(offsets_.back());
  data_[0] = 1.0;
  for (int N = 1; N <= max_row; ++N) {
    long double* cur = data_.data() + offsets_[N];
    const long double* prev = data_.data() + offsets_[N - 1];
    cur[0] = 1.0;
    cur[N] = 1.0;
    for (int t = 1; t < N; ++t) cur[t] = prev[t - 1] + prev[t];
  }
}

std::span<const long double> PascalTable::row(int N) const {
  if (N < 0 || N > max_row_) fail(ErrorKind::IndexOutOfRange, "Pascal row out of range");
  return {data_.data() + offsets_[N], static_cast<std::size_t>(N) + 1};
}

const PascalTable& pascal(int max_row) {
  // Tables only grow. Superseded ones are kept so earlier references stay valid.
  static std::mutex mu;
  static std::vector<std::unique_ptr<const PascalTable>> tables;
  std::lock_guard lock(mu);
  if (tables.empty() || tables.back()->max_row() < max_row) {
    tables.push_back(std::make_unique<const PascalTable>(std::max(max_row, 64)));
  }
  return *tables.back();
}

std::vector<long double> binomial_convolve(std::span<const long double> u, std::span<const long double> v) {
  if (u.size() != v.size() || u.empty()) fail(ErrorKind::InvalidParams, "convolution operands must share a length");
  const int M = static_cast<int>(u.size()) - 1;
  const PascalTable& table = pascal(M);
  std::vector<long double> out(u.size());
  for (int N = 0; N <= M; ++N) {
    const long double* c = table.row(N).data();
    long double acc = 0.0L;
    for (int t = 0; t <= N; ++t) acc += c[t] * u[t] * v[N - t];
    out[N] = acc;
  }
  return out;
}

}  // namespace entswitch
