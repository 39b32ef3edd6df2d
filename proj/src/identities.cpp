#include "entswitch/identities.hpp"

#include <algorithm>
#include <cmath>

namespace entswitch::comb {

namespace {

constexpr GKind kKinds[] = {GKind::One, GKind::Identity, GKind::IdentityMinusOne};

void add(IdentitySuite& suite, IdentityRow row) {
  row.residual = std::fabs(row.lhs - row.rhs);
  suite.max_residual = std::max(suite.max_residual, row.residual);
  suite.max_tail_bound = std::max(suite.max_tail_bound, row.tail_bound);
  suite.rows.push_back(std::move(row));
}

}  // namespace

IdentitySuite identity_suite(const IdentityGrid& grid) {
  if (grid.k_min < 3 || grid.k_max < grid.k_min || grid.L_max < 0 || grid.alternating_n_max < 1) {
    fail(ErrorKind::InvalidParams, "identity grid is empty or malformed");
  }
  IdentitySuite suite;
  for (int k = grid.k_min; k <= grid.k_max; ++k) {
    for (int J = 1; J < k; ++J) {
      const double rho = static_cast<double>(J) / k;
      for (int L = 0; L <= grid.L_max; ++L) {
        const SeriesTruncation trunc = truncation_for(rho, L + 2, L + 1, grid.tail_tol);
        for (GKind g : kKinds) {
          const int gi = static_cast<int>(g);
          const CertifiedValue d0 = F_direct(g, 0, J, L, k, trunc);
          add(suite, {"F0_closed", k, J, L, 0, gi, d0.value, F0_closed(g, J, L, k), 0.0, d0.tail_bound});
          for (int m = 1; m < J; ++m) {
            const CertifiedValue d = F_direct(g, m, J, L, k, trunc);
            add(suite, {"F_recursion", k, J, L, m, gi, d.value, F_via_recursion(g, m, J, L, k), 0.0, d.tail_bound});
          }
        }
        const double z = 1.0 / k;
        const GeneratingResiduals gen =
            generating_identity_residuals(J, L, z, truncation_for(J * z, L + 2, L, grid.tail_tol));
        for (int w = 0; w < 5; ++w) {
          add(suite, {"generating", k, J, L, w, -1, gen.residual[w], 0.0, 0.0, gen.tail_bound});
        }
      }
    }
    for (int n = 3; n <= k; ++n) {
      for (int a = -1; a <= grid.L_max; ++a) {
        const SeriesTruncation trunc = truncation_for(static_cast<double>(n - 2) / k, a + 3, a + 3, grid.tail_tol);
        for (GKind g : kKinds) {
          const int m_max = g == GKind::One ? n - 1 : n - 2;
          for (int m = 1; m <= m_max; ++m) {
            const CertifiedValue d = G_direct(g, a, n, m, k, trunc);
            add(suite, {"G_closed", k, n, a, m, static_cast<int>(g), d.value, G_closed(g, a, n, m, k), 0.0,
                        d.tail_bound});
          }
        }
      }
    }
  }
  // Monomials n^d and the shifted power (n + 1)^d, expanded with integer
  // coefficients.
  for (int n = 1; n <= grid.alternating_n_max; ++n) {
    for (int d = 0; d < n; ++d) {
      std::vector<BigInt> mono(static_cast<std::size_t>(d) + 1, 0);
      mono.back() = 1;
      std::vector<BigInt> shifted(static_cast<std::size_t>(d) + 1, 0);
      for (int e = 0; e <= d; ++e) {
        BigInt c = 1;
        for (int t = 0; t < e; ++t) c = c * (d - t) / (t + 1);
        shifted[e] = c;
      }
      for (const auto* poly : {&mono, &shifted}) {
        const BigInt r = alternating_binomial_residual_exact(*poly, n);
        if (r != 0) suite.alternating_exact = false;
        add(suite, {"alternating", 0, n, d, 0, -1, r.convert_to<double>(), 0.0, 0.0, 0.0});
      }
    }
  }
  return suite;
}

}  // namespace entswitch::comb
