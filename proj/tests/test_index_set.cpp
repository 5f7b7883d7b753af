#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "lattice/index_set.hpp"
#include "lattice/util.hpp"
#include "test_support.hpp"

using namespace lattice;
using namespace testsupport;

namespace {

// Every h in [-H,H]^d with r(h) <= M, by brute force.
std::vector<FrequencyIndex> box_scan(const SpaceParams& params, double M, int H) {
  std::vector<FrequencyIndex> out;
  std::vector<int> h(static_cast<std::size_t>(params.d), -H);
  while (true) {
    FrequencyIndex idx{h};
    if (r_factor(params, idx) <= M) out.push_back(idx);
    int j = 0;
    for (; j < params.d; ++j) {
      if (h[j] < H) {
        ++h[j];
        break;
      }
      h[j] = -H;
    }
    if (j == params.d) break;
  }
  std::sort(out.begin(), out.end(), frequency_order);
  return out;
}

int box_radius(const SpaceParams& params, double M) {
  const double top = params.weights.max_weight() * M;
  return static_cast<int>(std::ceil(std::pow(std::max(top, 1.0), 1.0 / params.alpha))) + 1;
}

}  // namespace

TEST_CASE("one-dimensional counts") {
  CHECK(b1_count(10.0, 2.0) == 6);
  CHECK(b1_count(9.0, 2.0) == 6);  // boundary included
  CHECK(b1_count(8.9, 2.0) == 4);  // just below the boundary
  CHECK(b1_count(0.5, 2.0) == 0);
  CHECK_THROWS_AS(b1_count(-1.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(b1_count(4.0, 1.0), std::domain_error);
}

TEST_CASE("the classic seven-index set") {
  const SpaceParams params = make_space_params(2.0, 1, WeightModel::product({1.0}));
  const IndexSet A = enumerate_index_set(params, 10.0);
  REQUIRE(A.size() == 7);
  for (int v : {-3, -2, -1, 0, 1, 2, 3}) {
    const FrequencyIndex h{{v}};
    CHECK(std::find(A.indices.begin(), A.indices.end(), h) != A.indices.end());
  }
  CHECK(A.M == 10.0);
  CHECK(A.params.alpha == 2.0);
  CHECK(A.params.d == 1);
}

TEST_CASE("enumeration equals the box scan") {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 12; ++trial) {
    const int d = pick(rng, 1, 3);
    const SpaceParams params = make_space_params(pick(rng, 0, 1) ? 2.0 : 4.0, d,
                                                 random_weight_model(rng, d));
    const double M = uniform(rng, 0.5, 200.0);
    const IndexSet A = enumerate_index_set(params, M);
    const std::vector<FrequencyIndex> want = box_scan(params, M, box_radius(params, M));
    REQUIRE(A.indices.size() == want.size());
    CHECK(A.indices == want);  // same sort order on both sides
  }
}

TEST_CASE("zero-weight supports are excluded") {
  const SpaceParams params =
      make_space_params(2.0, 2, WeightModel::explicit_general(2, {{0b01, 1.0}}));
  const IndexSet A = enumerate_index_set(params, 10.0);
  CHECK(A.size() == 7);  // second coordinate never appears
  for (const FrequencyIndex& h : A.indices) CHECK(h.h[1] == 0);
}

TEST_CASE("tiny cutoff leaves nothing") {
  const SpaceParams params = make_space_params(2.0, 2, WeightModel::product({1.0, 1.0}));
  CHECK(enumerate_index_set(params, 0.5).size() == 0);  // even h = 0 has r = 1 > M
  // At M = 1 the boundary is inclusive and |h_j| = 1 contributes a factor 1,
  // so the full {-1,0,1}^2 block qualifies.
  CHECK(enumerate_index_set(params, 1.0).size() == 9);
}

TEST_CASE("cardinality bound dominates the count") {
  std::mt19937_64 rng(515);
  for (int trial = 0; trial < 8; ++trial) {
    const int d = pick(rng, 1, 3);
    const SpaceParams params = make_space_params(2.0, d, random_weight_model(rng, d));
    const double M = uniform(rng, 1.0, 500.0);
    const double count = static_cast<double>(enumerate_index_set(params, M).size());
    for (double q : {1.0, 0.85, 0.7, 0.6}) {
      CHECK(count <= cardinality_bound(params, M, q) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("cardinality bound input checks") {
  const SpaceParams params = make_space_params(2.0, 1, WeightModel::product({1.0}));
  CHECK_THROWS_AS(cardinality_bound(params, 10.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(cardinality_bound(params, -1.0, 1.0), std::invalid_argument);
}

TEST_CASE("budget guard") {
  const SpaceParams params = make_space_params(2.0, 1, WeightModel::product({1.0}));
  CHECK_THROWS_AS(enumerate_index_set(params, 100.0, 5), BudgetError);

  std::vector<double> g(27, 1.0);
  const SpaceParams big = make_space_params(2.0, 27, WeightModel::product(g));
  CHECK_THROWS_AS(enumerate_index_set(big, 2.0), BudgetError);
}
