#pragma once

#include <cstdint>
#include <vector>

#include "lattice/criterion.hpp"

namespace lattice {

struct CbcStep {
  int s = 0;
  int chosen_z = 0;
  double chosen_value = 0.0;
  // T_{d,s} with the step component set to 1..n-1, in that order.
  std::vector<double> candidate_values;
};

struct CbcResult {
  GeneratingVector rule;
  std::vector<CbcStep> steps;
};

// Component-by-component minimization of T_{d,s}; ties go to the smallest
// candidate. The trace keeps every candidate value of every step.
CbcResult cbc_construct(const CriterionContext& ctx);

struct SearchResult {
  GeneratingVector rule;
  double value = 0.0;
};

// Minimizes S_d over all (n-1)^d vectors, first minimizer in lexicographic
// order; throws BudgetError when the grid exceeds the budget.
SearchResult exhaustive_search(const CriterionContext& ctx, std::int64_t budget = 1'000'000);

}  // namespace lattice
