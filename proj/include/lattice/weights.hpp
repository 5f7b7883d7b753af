#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace lattice {

enum class WeightKind { ExplicitGeneral, Product, OrderDependent, POD };

// Multiplier applied per subset in weighted sums over 2^{1:s}.
enum class CardFactor { One, Card, CardOrOne };

// Nonnegative weights gamma_u over subsets u of {1,...,d}, gamma_empty = 1.
// Subsets are bitmasks: bit j-1 set <=> coordinate j in u. d <= 63.
class WeightModel {
 public:
  static WeightModel product(std::vector<double> gammas);
  // order_factors = Gamma_0..Gamma_d, Gamma_0 = 1.
  static WeightModel order_dependent(int d, std::vector<double> order_factors);
  static WeightModel pod(std::vector<double> gammas, std::vector<double> order_factors);
  // Missing table entries are 0; the empty set is implicitly 1.
  static WeightModel explicit_general(int d, std::map<std::uint64_t, double> table);

  WeightKind kind() const { return kind_; }
  int dimension() const { return d_; }

  double gamma(std::uint64_t u) const;             // throws if u has bits beyond d
  double gamma(std::span<const int> u) const;      // 1-based coordinate list
  double max_weight() const;                       // max_u gamma_u (includes empty set)

  const std::vector<double>& product_gammas() const { return gammas_; }
  const std::vector<double>& order_factors() const { return order_factors_; }
  const std::map<std::uint64_t, double>& table() const { return table_; }

  bool operator==(const WeightModel&) const = default;

 private:
  WeightKind kind_ = WeightKind::Product;
  int d_ = 0;
  std::vector<double> gammas_;          // Product, POD
  std::vector<double> order_factors_;   // OrderDependent, POD
  std::map<std::uint64_t, double> table_;  // ExplicitGeneral (canonical, sparse)
  std::vector<double> dense_;           // ExplicitGeneral cache for small d

  double table_gamma(std::uint64_t u) const;
  void check_mask(std::uint64_t u) const;
};

// View beta_u = gamma_{u union w} over subsets u of {1:s}, for a fixed w
// disjoint from {1:s}. Supports the restriction and union-with-future-index
// operations needed by the dimension-wise recursion without materializing
// tables. For structured kinds the extra set folds into a scale factor and/or
// an order offset, which also serves grouped sums over |w|.
class SubsetWeights {
 public:
  static SubsetWeights whole(const WeightModel& m, int s);

  SubsetWeights with_extra(int j) const;           // beta'_u = beta_{u union {j}}, j > s
  SubsetWeights with_extra_mask(std::uint64_t w) const;
  SubsetWeights with_card_offset(int t) const;     // OrderDependent/POD only
  SubsetWeights restricted(int s) const;

  int active_dim() const { return s_; }
  double operator()(std::uint64_t u) const;

  // sum_u beta_u * prod_{j in u} phi[j-1],  phi.size() == s
  double kernel_sum(std::span<const double> phi) const;
  // sum_u beta_u^2 * c^{|u|}
  double square_sum(double c) const;
  // sum_u kappa(u) * beta_u^lam * c^{|u|}
  double pow_sum(double lam, double c, CardFactor kappa) const;

 private:
  const WeightModel* model_ = nullptr;
  std::uint64_t extra_ = 0;   // ExplicitGeneral
  int card_off_ = 0;          // OrderDependent, POD
  double scale_ = 1.0;        // Product, POD
  int s_ = 0;
};

// Smallest xi such that gamma_{u union w}^lam * [2 zeta(alpha lam)]^{|w|}
// <= xi * gamma_u^lam over all s in {1:d}, u within {1:s}, w within {s+1:d},
// restricted to gamma_u > 0; xi is clamped below at 1. Returns nullopt when
// some gamma_u = 0 has a positive-weight superset of that shape, in which
// case no finite xi exists.
std::optional<double> check_decay_condition(const WeightModel& m, double alpha, double lam);

// e_t(x_1..x_k) for t = 0..k (elementary symmetric polynomials).
std::vector<double> elementary_symmetric(std::span<const double> x);

}  // namespace lattice
