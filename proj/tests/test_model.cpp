#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "entswitch/model.hpp"
#include "support.hpp"

using namespace entswitch;

namespace {

// Kernel written out from the transition rules, independent of the library.
std::map<std::vector<std::int64_t>, double> oracle_kernel(int k, int n, const std::vector<std::int64_t>& x) {
  std::map<std::vector<std::int64_t>, double> out;
  const int zeros = static_cast<int>(std::count(x.begin(), x.end(), 0));
  if (zeros == n - 1) {
    for (int l = 0; l < n - 1; ++l) {
      auto y = x;
      ++y[l];
      out[y] += 1.0 / (n - 1);
    }
    return out;
  }
  if (zeros == 0) {
    auto y = x;
    for (auto& v : y) --v;
    out[y] += double(k - n + 1) / k;
  }
  for (int l = 0; l < n - 1; ++l) {
    auto y = x;
    ++y[l];
    out[y] += x[l] == 0 ? double(k - (n - 1 - zeros)) / (double(k) * zeros) : 1.0 / k;
  }
  return out;
}

std::map<std::vector<std::int64_t>, double> as_map(const TransitionList& t) {
  std::map<std::vector<std::int64_t>, double> out;
  for (const auto& e : t.entries) {
    const auto v = e.target.values();
    out[{v.begin(), v.end()}] += e.weight;
  }
  return out;
}

}  // namespace

TEST(Params, RejectsInvalidSets) {
  EXPECT_KIND(SwitchParams(2, 3), ErrorKind::InvalidParams);
  EXPECT_KIND(SwitchParams(5, 2), ErrorKind::InvalidParams);
  EXPECT_KIND(SwitchParams(5, 3, 0.0), ErrorKind::InvalidParams);
  EXPECT_KIND(SwitchParams(5, 3, 1.0, 1.5), ErrorKind::InvalidParams);
  EXPECT_KIND(SwitchParams(5, 3, 1.0, -0.1), ErrorKind::InvalidParams);
  EXPECT_NO_THROW(SwitchParams(3, 3));
  EXPECT_EQ(SwitchParams(7, 4).dim(), 3);
}

TEST(State, RejectsNegativeEntries) { EXPECT_KIND(OccupancyState({1, -1}), ErrorKind::InvalidParams); }

TEST(State, ValidateChecksLength) {
  EXPECT_KIND(validate_state(SwitchParams(5, 3), OccupancyState({1, 1, 1})), ErrorKind::InvalidParams);
  EXPECT_NO_THROW(validate_state(SwitchParams(5, 3), OccupancyState({0, 4})));
}

TEST(Classify, CountsZeroEntries) {
  EXPECT_EQ(classify(OccupancyState{1, 1}), 0);
  EXPECT_EQ(classify(OccupancyState{0, 2}), 1);
  EXPECT_EQ(classify(OccupancyState{0, 0}), 2);
}

TEST(Classify, BoundaryCountsOnes) {
  EXPECT_EQ(classify_boundary(OccupancyState{1, 1, 3}), 2);
  EXPECT_EQ(classify_boundary(OccupancyState{2, 2}), 0);
  EXPECT_KIND(classify_boundary(OccupancyState{0, 1}), ErrorKind::NotInS);
}

TEST(Dtmc, SwapReadyRow) {
  const auto t = dtmc_transitions(SwitchParams(4, 3), OccupancyState{1, 1});
  EXPECT_EQ(t.mode, WeightMode::Probability);
  ASSERT_EQ(t.entries.size(), 3u);
  EXPECT_EQ(t.entries[0].target, (OccupancyState{0, 0}));
  EXPECT_DOUBLE_EQ(t.entries[0].weight, 0.5);
  EXPECT_DOUBLE_EQ(*t.weight_of(OccupancyState{2, 1}), 0.25);
  EXPECT_DOUBLE_EQ(*t.weight_of(OccupancyState{1, 2}), 0.25);
}

TEST(Dtmc, OneEmptySlotRow) {
  const auto t = dtmc_transitions(SwitchParams(4, 3), OccupancyState{0, 2});
  ASSERT_EQ(t.entries.size(), 2u);
  EXPECT_DOUBLE_EQ(*t.weight_of(OccupancyState{1, 2}), 0.75);
  EXPECT_DOUBLE_EQ(*t.weight_of(OccupancyState{0, 3}), 0.25);
}

TEST(Dtmc, EmptyStateRow) {
  const auto t = dtmc_transitions(SwitchParams(4, 3), OccupancyState{0, 0});
  EXPECT_DOUBLE_EQ(*t.weight_of(OccupancyState{1, 0}), 0.5);
  EXPECT_DOUBLE_EQ(*t.weight_of(OccupancyState{0, 1}), 0.5);
  EXPECT_FALSE(t.weight_of(OccupancyState{1, 1}).has_value());
}

TEST(Dtmc, MatchesRuleOracleOnRandomStates) {
  std::mt19937_64 rng(7);
  for (int k = 3; k <= 12; ++k) {
    for (int n = 3; n <= k; ++n) {
      const SwitchParams p(k, n);
      for (int rep = 0; rep < 40; ++rep) {
        std::vector<std::int64_t> x(n - 1);
        for (auto& v : x) v = std::uniform_int_distribution<int>(0, 3)(rng) == 0 ? 0 : rng() % 9;
        const auto t = dtmc_transitions(p, OccupancyState(x));
        EXPECT_NEAR(t.total(), 1.0, 1e-12);
        const auto got = as_map(t);
        const auto want = oracle_kernel(k, n, x);
        ASSERT_EQ(got.size(), want.size());
        for (const auto& [target, w] : want) EXPECT_NEAR(got.at(target), w, 1e-15);
      }
    }
  }
}

TEST(Dtmc, ExactKernelAgreesWithDouble) {
  const SwitchParams p(7, 5);
  for (const OccupancyState& x : {OccupancyState{0, 0, 0, 0}, OccupancyState{0, 3, 0, 1}, OccupancyState{2, 1, 1, 5}}) {
    const auto d = dtmc_transitions(p, x);
    const auto e = dtmc_transitions_exact(p, x);
    ASSERT_EQ(d.entries.size(), e.size());
    Rational total = 0;
    for (std::size_t i = 0; i < e.size(); ++i) {
      EXPECT_EQ(d.entries[i].target, e[i].target);
      EXPECT_NEAR(d.entries[i].weight, e[i].weight.convert_to<double>(), 1e-16);
      total += e[i].weight;
    }
    EXPECT_EQ(total, 1);
  }
}

TEST(Dtmc, ZeroSlotFormulaAtFullyEmptyReducesToUniform) {
  for (int k = 3; k <= 12; ++k) {
    for (int n = 3; n <= k; ++n) {
      const int j = n - 1;
      EXPECT_NEAR(double(k - (n - 1 - j)) / (double(k) * j), 1.0 / (n - 1), 1e-15);
      const auto t = dtmc_transitions(SwitchParams(k, n), OccupancyState::zeros(n - 1));
      for (const auto& e : t.entries) EXPECT_NEAR(e.weight, 1.0 / (n - 1), 1e-15);
    }
  }
}

TEST(Dtmc, PermutationEquivariance) {
  const SwitchParams p(8, 5);
  std::vector<std::int64_t> x{0, 3, 1, 0};
  const auto base = as_map(dtmc_transitions(p, OccupancyState(x)));
  std::vector<int> perm{0, 1, 2, 3};
  do {
    std::vector<std::int64_t> px(4);
    for (int i = 0; i < 4; ++i) px[i] = x[perm[i]];
    const auto got = as_map(dtmc_transitions(p, OccupancyState(px)));
    for (const auto& [target, w] : base) {
      std::vector<std::int64_t> pt(4);
      for (int i = 0; i < 4; ++i) pt[i] = target[perm[i]];
      EXPECT_NEAR(got.at(pt), w, 1e-15);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
}

TEST(Ctmc, RatesScaleByTotalClock) {
  const auto t = ctmc_transitions(SwitchParams(4, 3, 1.0), OccupancyState{1, 1});
  EXPECT_EQ(t.mode, WeightMode::Rate);
  EXPECT_DOUBLE_EQ(*t.weight_of(OccupancyState{0, 0}), 2.0);
  EXPECT_DOUBLE_EQ(*t.weight_of(OccupancyState{2, 1}), 1.0);
  EXPECT_DOUBLE_EQ(*t.weight_of(OccupancyState{1, 2}), 1.0);
  EXPECT_NEAR(ctmc_transitions(SwitchParams(4, 3, 0.5), OccupancyState{0, 0}).total(), 2.0, 1e-12);
}

TEST(Ctmc, OneEmptySlotAtFiveLinks) {
  // (k - (n-1-j)) / (k j) * k mu = 4 for the empty slot, 1 for the other.
  const auto t = ctmc_transitions(SwitchParams(5, 3, 1.0), OccupancyState{0, 2});
  EXPECT_DOUBLE_EQ(*t.weight_of(OccupancyState{1, 2}), 4.0);
  EXPECT_DOUBLE_EQ(*t.weight_of(OccupancyState{0, 3}), 1.0);
  EXPECT_NEAR(t.total(), 5.0, 1e-12);
}

TEST(Ctmc, RowSumIsConstant) {
  std::mt19937_64 rng(11);
  for (int k = 3; k <= 12; ++k) {
    for (int n = 3; n <= k; ++n) {
      const double mu = 0.3 + 0.1 * k;
      for (int rep = 0; rep < 10; ++rep) {
        std::vector<std::int64_t> x(n - 1);
        for (auto& v : x) v = rng() % 4;
        EXPECT_NEAR(ctmc_transitions(SwitchParams(k, n, mu), OccupancyState(x)).total(), k * mu, 1e-12);
      }
    }
  }
}

TEST(Swap, IdentifiesDecrementOutOfR0) {
  const SwitchParams p(4, 3);
  EXPECT_TRUE(is_swap_transition(p, OccupancyState{1, 1}, OccupancyState{0, 0}));
  EXPECT_FALSE(is_swap_transition(p, OccupancyState{1, 1}, OccupancyState{2, 1}));
  EXPECT_FALSE(is_swap_transition(p, OccupancyState{0, 2}, OccupancyState{1, 2}));
  EXPECT_KIND(is_swap_transition(p, OccupancyState{1, 1}, OccupancyState{3, 3}), ErrorKind::UnreachableTarget);
}
