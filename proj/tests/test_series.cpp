#include <cmath>
#include <limits>
#include <vector>

#include "entswitch/series.hpp"
#include "support.hpp"

using namespace entswitch;

TEST(Truncation, Validates) {
  EXPECT_KIND(SeriesTruncation(-1, 1e-9), ErrorKind::InvalidParams);
  EXPECT_KIND(SeriesTruncation(10, 0.0), ErrorKind::InvalidParams);
  EXPECT_NO_THROW(SeriesTruncation(0, 1e-9));
}

TEST(TailBound, DominatesBruteForceTail) {
  for (double rho : {0.1, 0.5, 0.8}) {
    for (int degree : {0, 1, 3}) {
      for (double shift : {0.0, 2.0}) {
        for (int M : {20, 60, 150}) {
          long double tail = 0.0L;
          for (int N = M + 1; N < M + 4000; ++N) tail += std::pow((long double)(N + shift), degree) * std::pow((long double)rho, N);
          const double bound = geometric_tail_bound(rho, degree, shift, M);
          EXPECT_GE(bound, static_cast<double>(tail) * (1 - 1e-12)) << rho << " " << degree << " " << M;
        }
      }
    }
  }
}

TEST(TailBound, InfiniteWhenRatioTestDoesNotClose) {
  EXPECT_TRUE(std::isinf(geometric_tail_bound(0.99, 5, 0.0, 10)));
}

TEST(RequiredTotal, MeetsTolerance) {
  const int M = required_total(0.5, 2, 1.0, 1.0, 1e-12);
  EXPECT_LE(geometric_tail_bound(0.5, 2, 1.0, M), 1e-12);
  EXPECT_GT(geometric_tail_bound(0.5, 2, 1.0, M - 1), 1e-12);
}

TEST(Factorials, LogTable) {
  const auto& lf = log_factorials(200);
  for (int i = 0; i <= 200; ++i) EXPECT_NEAR(lf[i], std::lgamma(i + 1.0), 1e-9 * std::max(1.0, lf[i]));
}

TEST(Pascal, RowsMatchRecurrence) {
  const auto& p = pascal(120);
  ASSERT_GE(p.max_row(), 120);
  std::vector<long double> prev{1.0L};
  for (int N = 1; N <= 60; ++N) {
    std::vector<long double> row(N + 1, 1.0L);
    for (int t = 1; t < N; ++t) row[t] = prev[t - 1] + prev[t];
    const auto got = p.row(N);
    ASSERT_EQ(got.size(), row.size());
    for (int t = 0; t <= N; ++t) EXPECT_EQ(got[t], row[t]);
    prev = row;
  }
}

TEST(BinomialConvolve, MatchesNaiveSum) {
  std::vector<long double> u(40), v(40);
  for (int i = 0; i < 40; ++i) {
    u[i] = std::pow(0.3L, i) * (i + 1);
    v[i] = std::pow(0.2L, i);
  }
  const auto out = binomial_convolve(u, v);
  ASSERT_EQ(out.size(), 40u);
  for (int N = 0; N < 40; ++N) {
    long double s = 0.0L, c = 1.0L;
    for (int t = 0; t <= N; ++t) {
      s += c * u[t] * v[N - t];
      c = c * (N - t) / (t + 1);
    }
    EXPECT_NEAR(static_cast<double>(out[N]), static_cast<double>(s), 1e-15 * std::max(1.0L, std::fabs(s)));
  }
}
