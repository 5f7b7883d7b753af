#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lattice/index_set.hpp"
#include "lattice/korobov.hpp"
#include "lattice/weights.hpp"

namespace lattice {

struct GeneratingVector {
  int n = 0;
  std::vector<int> z;

  int dim() const { return static_cast<int>(z.size()); }
};

// Validates primality of n and component range 1..n-1.
GeneratingVector make_generating_vector(int n, std::vector<int> z);

// Space, rule size, and the precomputed kernel values phi_alpha(m/n) shared
// by every criterion evaluation. Immutable after construction.
class CriterionContext {
 public:
  CriterionContext(SpaceParams space, int n, KernelMode mode = KernelMode::Auto,
                   double kernel_tol = 1e-12);

  const SpaceParams& space() const { return space_; }
  const WeightModel& weights() const { return space_.weights; }
  double alpha() const { return space_.alpha; }
  int d() const { return space_.d; }
  int n() const { return n_; }
  double two_zeta_2alpha() const { return two_zeta_2alpha_; }
  double two_zeta_alpha() const { return two_zeta_alpha_; }
  // phi_alpha({m/n}) by residue; kappa[m] == kappa[n-m] bitwise.
  double kernel(std::int64_t m) const { return kernel_[m % n_]; }

  std::int64_t oracle_budget = 400'000'000;  // box points an oracle may visit

 private:
  SpaceParams space_;
  int n_;
  std::vector<double> kernel_;
  double two_zeta_2alpha_;
  double two_zeta_alpha_;
};

// Phi(k) = sum_u gamma_u prod_{j in u} phi_alpha({k z_j / n}).
double phi_weighted_sum(const CriterionContext& ctx, int k, const GeneratingVector& gv);

// Generalized criterion over the first s coordinates with view weights:
// S_s = (1/n) sum_k Phi_beta(k)^2 - sum_u beta_u^2 [2 zeta(2 alpha)]^{|u|}.
double S_prefix(const CriterionContext& ctx, std::span<const int> z, const SubsetWeights& beta);

double S_d(const CriterionContext& ctx, const GeneratingVector& gv);

// S over the first z.size() coordinates with an externally supplied weight
// model beta over subsets of {1:s}.
double S_weighted(const CriterionContext& ctx, std::span<const int> z, const WeightModel& beta);

// theta_s: the S_s summand restricted to l_s != 0, obtained by peeling the
// recursion: theta_s = S_s(beta) - S_{s-1}(beta) - 2 zeta(2 alpha) S_{s-1}(beta_{. union {s}}).
double theta_view(const CriterionContext& ctx, std::span<const int> z, const SubsetWeights& beta);
double theta_s(const CriterionContext& ctx, std::span<const int> z, const WeightModel& beta);

// T_{d,s}(z_1..z_s) = sum_{w in {s+1:d}} [2 zeta(2 alpha)]^{|w|} theta_s with
// weights gamma_{u union w}. Structured kinds use grouped or factorized forms.
double T_ds(const CriterionContext& ctx, int s, std::span<const int> z);
// Literal subset enumeration over w, any weight kind; equality-check target.
double T_ds_naive(const CriterionContext& ctx, int s, std::span<const int> z);

double worst_case_integration_error(const CriterionContext& ctx, const GeneratingVector& gv);

struct EdResult {
  double value = 0.0;
  // (n-1)^alpha / gamma_{1} <= M: frequencies beyond the resolution of the
  // rule sit inside A, so aliasing is structurally unavoidable.
  bool n_too_small = false;
};

// E_d = sum_{h in A} sum_{l != 0, l.z = 0 mod n} 1/r(h+l) via residue class
// sums of the dual transform.
EdResult E_d(const CriterionContext& ctx, const GeneratingVector& gv, const IndexSet& A);
// Enumerates A_d(M) first; index_budget guards the enumeration.
EdResult E_d(const CriterionContext& ctx, const GeneratingVector& gv, double M,
             std::int64_t index_budget = 20'000'000);

struct OracleValue {
  double value = 0.0;
  double tail_bound = 0.0;  // analytic bound on the truncated-away mass
};

// Truncated double-sum oracle over the box |h_j| <= H, |h_j + l_j| <= H,
// grouped by residue class; independent of the kernel-identity path.
OracleValue S_d_oracle(const CriterionContext& ctx, const GeneratingVector& gv, std::int64_t H);

// Direct-sum oracle for theta_s (l_s != 0 enforced) over the same box.
// Accepts any weight view so the grouped T_{d,s} summands are testable.
OracleValue theta_oracle(const CriterionContext& ctx, std::span<const int> z,
                         const SubsetWeights& beta, std::int64_t H);

// Squared worst-case integration error by direct summation of the class of 0.
OracleValue integration_error_squared_oracle(const CriterionContext& ctx,
                                             const GeneratingVector& gv, std::int64_t H);

// Direct-sum oracle for E_d; requires H to cover every index of A.
OracleValue E_d_oracle(const CriterionContext& ctx, const GeneratingVector& gv, const IndexSet& A,
                       std::int64_t H);

}  // namespace lattice
