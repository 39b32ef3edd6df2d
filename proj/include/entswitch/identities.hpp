#pragma once

#include <string>
#include <vector>

#include "entswitch/comb.hpp"

namespace entswitch::comb {

struct IdentityGrid {
  int k_min = 5;
  int k_max = 10;
  int L_max = 3;
  int alternating_n_max = 12;
  // Tail target handed to truncation_for for every truncated sum.
  double tail_tol = 1e-12;
};

// One comparison between a truncated sum and its closed form. For F rows the
// indices are (k, J, L, m); for G rows (k, n, a, m); for generating rows
// (k, J, L) with m holding the weight index 0..4; for alternating rows
// (n, degree).
struct IdentityRow {
  std::string family;
  int k = 0;
  int J = 0;
  int L = 0;
  int m = 0;
  int g = -1;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double tail_bound = 0.0;
};

struct IdentitySuite {
  std::vector<IdentityRow> rows;
  double max_residual = 0.0;
  double max_tail_bound = 0.0;
  // Every alternating row evaluated to exactly zero in integer arithmetic.
  bool alternating_exact = true;
};

IdentitySuite identity_suite(const IdentityGrid& grid = {});

}  // namespace entswitch::comb
