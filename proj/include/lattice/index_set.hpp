#pragma once

#include <cstdint>
#include <vector>

#include "lattice/korobov.hpp"

namespace lattice {

// A_d(M) = {h : r(h) <= M}, boundary inclusive, sorted by frequency_order.
struct IndexSet {
  double M = 0.0;
  std::vector<FrequencyIndex> indices;
  SpaceParams params{};

  std::size_t size() const { return indices.size(); }
};

// Enumerates A_d(M) support by support. Throws BudgetError when the
// cardinality bound pre-check and the running count both exceed the budget.
IndexSet enumerate_index_set(const SpaceParams& params, double M,
                             std::int64_t budget = 20'000'000);

// M^q sum_u [2 zeta(alpha q)]^{|u|} gamma_u^q for q > 1/alpha.
double cardinality_bound(const SpaceParams& params, double M, double q);

// Number of one-dimensional indices with |h|^alpha <= m and h != 0.
std::int64_t b1_count(double m, double alpha);

}  // namespace lattice
