#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "entswitch/simd/kernels.hpp"

using namespace entswitch::simd;

namespace {

struct Data {
  std::vector<double> a, b, c;
  std::vector<std::int32_t> cols;
  std::vector<double> vals;
  std::size_t rows = 0, width = 0;
};

// Lengths straddle the 4-wide vector boundary so the tail loops are exercised.
Data make_data(std::size_t n, std::size_t width, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Data d;
  d.rows = n;
  d.width = width;
  for (auto* v : {&d.a, &d.b, &d.c}) {
    v->resize(n);
    for (auto& x : *v) x = u(rng);
  }
  d.cols.resize(n * width);
  d.vals.resize(n * width);
  for (std::size_t i = 0; i < n * width; ++i) {
    d.cols[i] = static_cast<std::int32_t>(rng() % n);
    d.vals[i] = (rng() % 5 == 0) ? 0.0 : u(rng);
  }
  return d;
}

const KernelTable* avx2_or_skip() {
  const KernelTable* t = avx2_kernels();
  if (t == nullptr || !cpu_supports(Isa::Avx2)) return nullptr;
  return t;
}

}  // namespace

TEST(Isa, Names) {
  EXPECT_EQ(to_string(Isa::Scalar), "scalar");
  EXPECT_EQ(to_string(Isa::Avx2), "avx2");
  EXPECT_EQ(scalar_kernels().isa, Isa::Scalar);
  EXPECT_TRUE(cpu_supports(Isa::Scalar));
  if (!cpu_supports(Isa::Avx2)) {
    EXPECT_EQ(kernels().isa, Isa::Scalar);
  }
}

TEST(ScalarKernels, ReferenceValues) {
  const auto& s = scalar_kernels();
  const std::vector<double> a{1, 2, 3}, b{4, -5, 6}, c{2, 2, 0.5};
  EXPECT_DOUBLE_EQ(s.sum(a.data(), 3), 6.0);
  EXPECT_DOUBLE_EQ(s.dot(a.data(), b.data(), 3), 12.0);
  EXPECT_DOUBLE_EQ(s.dot3(a.data(), b.data(), c.data(), 3), 8.0 - 20.0 + 9.0);
  EXPECT_DOUBLE_EQ(s.l1_distance(a.data(), b.data(), 3), 3.0 + 7.0 + 3.0);
  std::vector<double> y{3, 4, 5};
  s.average_into(y.data(), a.data(), 3);
  EXPECT_EQ(y, (std::vector<double>{2, 3, 4}));
  s.scale(y.data(), 0.5, 3);
  EXPECT_EQ(y, (std::vector<double>{1, 1.5, 2}));
  // Two rows, width two: row 0 = 2 x1 + 1 x0, row 1 = 3 x0 + padding.
  const std::vector<std::int32_t> cols{1, 0, 0, 0};
  const std::vector<double> vals{2, 3, 1, 0};
  const std::vector<double> x{10, 20};
  std::vector<double> out(2);
  s.ell_spmv(EllView{2, 2, cols.data(), vals.data()}, x.data(), out.data());
  EXPECT_EQ(out, (std::vector<double>{50, 30}));
}

TEST(Avx2Kernels, MatchScalarOnRandomData) {
  const KernelTable* v = avx2_or_skip();
  if (v == nullptr) GTEST_SKIP() << "AVX2 not available";
  EXPECT_EQ(v->isa, Isa::Avx2);
  const auto& s = scalar_kernels();
  for (std::size_t n : {1u, 3u, 4u, 7u, 16u, 33u, 1001u}) {
    for (std::size_t w : {1u, 3u, 5u}) {
      const Data d = make_data(n, w, n * 31 + w);
      const double tol = 1e-13 * static_cast<double>(n);
      EXPECT_NEAR(v->sum(d.a.data(), n), s.sum(d.a.data(), n), tol);
      EXPECT_NEAR(v->dot(d.a.data(), d.b.data(), n), s.dot(d.a.data(), d.b.data(), n), tol);
      EXPECT_NEAR(v->dot3(d.a.data(), d.b.data(), d.c.data(), n), s.dot3(d.a.data(), d.b.data(), d.c.data(), n),
                  tol);
      EXPECT_NEAR(v->l1_distance(d.a.data(), d.b.data(), n), s.l1_distance(d.a.data(), d.b.data(), n), tol);

      auto ys = d.b, yv = d.b;
      s.average_into(ys.data(), d.a.data(), n);
      v->average_into(yv.data(), d.a.data(), n);
      EXPECT_EQ(ys, yv);
      s.scale(ys.data(), 1.7, n);
      v->scale(yv.data(), 1.7, n);
      EXPECT_EQ(ys, yv);

      const EllView m{n, w, d.cols.data(), d.vals.data()};
      std::vector<double> os(n), ov(n);
      s.ell_spmv(m, d.a.data(), os.data());
      v->ell_spmv(m, d.a.data(), ov.data());
      for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(os[i], ov[i], 1e-14) << "n=" << n << " w=" << w;
    }
  }
}
