#include "lattice/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace lattice {

namespace {

void check_product_exponent(double alpha, double lam) {
  if (!(alpha * lam > 1.0)) throw std::domain_error("alpha * lambda must exceed 1");
}

void check_lambda_range(double alpha, double lam) {
  check_product_exponent(alpha, lam);
  if (!(lam <= 1.0)) throw std::domain_error("lambda must lie in (1/alpha, 1]");
}

}  // namespace

double tau(double alpha, double lam) {
  check_product_exponent(alpha, lam);
  return std::max(6.0, 2.5 + std::exp2(2.0 * alpha * lam + 1.0));
}

std::vector<double> lambda_grid(double alpha) {
  if (!(alpha > 1.0)) throw std::domain_error("alpha must exceed 1");
  const double floor_value = 1.0 / alpha + 0.05;
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) {
    const double lam = static_cast<double>(20 - i) / 20.0;
    if (lam < floor_value - 1e-12) break;
    grid.push_back(lam);
  }
  if (grid.empty()) grid.push_back(1.0);
  return grid;
}

double weight_sum(const SpaceParams& params, double lam, CardFactor kappa) {
  check_product_exponent(params.alpha, lam);
  const double c = 2.0 * riemann_zeta(params.alpha * lam);
  return SubsetWeights::whole(params.weights, params.d).pow_sum(lam, c, kappa);
}

double cbc_bound_final(const SpaceParams& params, int n, double lam, std::optional<double> xi) {
  check_lambda_range(params.alpha, lam);
  if (n < 2) throw std::invalid_argument("rule size must be at least 2");
  const double t = tau(params.alpha, lam);
  const double Q = weight_sum(params, lam, CardFactor::One);
  double first = 0.0;
  double scale = t / n;
  if (xi) {
    if (!(*xi >= 1.0)) throw std::invalid_argument("decay certificate must be at least 1");
    first = Q - 1.0;
    scale *= *xi;
  } else {
    first = weight_sum(params, lam, CardFactor::Card);
  }
  return std::pow(scale * first * Q, 1.0 / lam);
}

double lemma_avg_bound(double alpha, int n, const SubsetWeights& beta, double lam) {
  check_lambda_range(alpha, lam);
  if (n < 2) throw std::invalid_argument("rule size must be at least 2");
  const int s = beta.active_dim();
  if (s < 1) throw std::invalid_argument("bound needs at least one active coordinate");
  const double t = tau(alpha, lam);
  const double c = 2.0 * riemann_zeta(alpha * lam);
  // Subsets containing s split off the forced coordinate: one factor c times
  // the sum over the remaining s-1 coordinates with s adjoined.
  const double containing_s = c * beta.restricted(s - 1).with_extra(s).pow_sum(lam, c, CardFactor::One);
  const double all = beta.pow_sum(lam, c, CardFactor::One);
  return (t / n) * containing_s * all;
}

double auto_truncation(int n, double lam) {
  if (n < 2) throw std::invalid_argument("rule size must be at least 2");
  if (!(lam > 0.0)) throw std::domain_error("lambda must be positive");
  return std::pow(static_cast<double>(n), 1.0 / (2.0 * lam));
}

double two_term_bound(double M, double S_value) {
  if (!(M > 0.0)) throw std::invalid_argument("truncation level must be positive");
  if (S_value < -1e-9) throw std::invalid_argument("criterion value must be nonnegative");
  return std::sqrt(1.0 / M + M * std::max(S_value, 0.0));
}

double simplified_bound(const SpaceParams& params, int n, double lam) {
  check_lambda_range(params.alpha, lam);
  if (n < 2) throw std::invalid_argument("rule size must be at least 2");
  const double t = tau(params.alpha, lam);
  const double R = weight_sum(params, lam, CardFactor::CardOrOne);
  return std::sqrt(2.0) * std::pow(t, 0.5 / lam) * std::pow(static_cast<double>(n), -0.25 / lam) *
         std::pow(R, 1.0 / lam);
}

double integration_cbc_bound(const SpaceParams& params, int n, double lam) {
  check_lambda_range(params.alpha, lam);
  if (n < 2) throw std::invalid_argument("rule size must be at least 2");
  const double Q = weight_sum(params, lam, CardFactor::One);
  return std::pow(Q / (n - 1), 0.5 / lam);
}

InitialErrors initial_errors(const SpaceParams& params) {
  return {1.0, std::sqrt(params.weights.max_weight())};
}

double cardinality_factor_bound() { return std::exp(1.0 / std::exp(1.0)); }

ApproxErrorBound approx_error_bound(const SpaceParams& params, int n, double lam,
                                    std::optional<double> M, std::optional<double> S_value,
                                    std::optional<double> xi) {
  check_lambda_range(params.alpha, lam);
  ApproxErrorBound out;
  out.lambda = lam;
  out.M = M ? *M : auto_truncation(n, lam);
  out.envelope = cbc_bound_final(params, n, lam, xi);
  out.two_term = two_term_bound(out.M, S_value ? *S_value : out.envelope);
  out.simplified = simplified_bound(params, n, lam);
  return out;
}

}  // namespace lattice
