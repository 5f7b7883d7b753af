#pragma once

#include <optional>
#include <vector>

#include "lattice/korobov.hpp"
#include "lattice/weights.hpp"

namespace lattice {

// max(6, 2.5 + 2^{2 alpha lambda + 1}); requires alpha * lambda > 1.
double tau(double alpha, double lambda);

// Scan grid {1.00, 0.95, 0.90, ...} truncated at the smallest point that still
// satisfies lambda >= 1/alpha + 0.05; falls back to {1.0} when even 1.0 fails
// that margin (alpha barely above 1).
std::vector<double> lambda_grid(double alpha);

// sum_{u subseteq {1:d}} kappa(u) gamma_u^lambda [2 zeta(alpha lambda)]^{|u|}.
// kappa(u) = 1, |u|, or max(|u|, 1) per the CardFactor; the Card variant drops
// the empty set on its own.
double weight_sum(const SpaceParams& params, double lambda, CardFactor kappa);

// Envelope for the criterion value of a constructed rule:
//   [(tau/n) * (Card sum) * (One sum)]^{1/lambda},
// or, given a decay certificate xi >= 1, the variant with tau replaced by
// tau * xi and the cardinality factor replaced by 1.
double cbc_bound_final(const SpaceParams& params, int n, double lambda,
                       std::optional<double> xi = std::nullopt);

// Right-hand side of the component-scan average bound: with c = 2 zeta(alpha
// lambda) and s the active dimension of beta,
//   (tau/n) * (sum_{u : s in u} beta_u^lambda c^{|u|}) * (sum_u beta_u^lambda c^{|u|}).
// The average of theta_s(z_s)^lambda over z_s = 1..n-1 never exceeds it.
double lemma_avg_bound(double alpha, int n, const SubsetWeights& beta, double lambda);

// The balancing truncation level M = n^{1/(2 lambda)}.
double auto_truncation(int n, double lambda);

// sqrt(1/M + M * S).
double two_term_bound(double M, double S_value);

// sqrt(2) * tau^{1/(2 lambda)} * n^{-1/(4 lambda)} * (CardOrOne sum)^{1/lambda};
// the closed form obtained from the two-term bound at M = n^{1/(2 lambda)}.
double simplified_bound(const SpaceParams& params, int n, double lambda);

// Bound on the worst-case integration error of an integration-optimized rule:
//   [(One sum) / (n - 1)]^{1/(2 lambda)}.
double integration_cbc_bound(const SpaceParams& params, int n, double lambda);

struct InitialErrors {
  double integration = 1.0;    // zero-point integration error
  double approximation = 1.0;  // max_u gamma_u^{1/2}
};
InitialErrors initial_errors(const SpaceParams& params);

// e^{1/e} = 1.4446...; max(|u|, 1) <= (e^{1/e})^{|u|} for every u.
double cardinality_factor_bound();

struct ApproxErrorBound {
  double lambda = 1.0;
  double M = 0.0;
  double envelope = 0.0;   // criterion-value envelope used when no measured value is given
  double two_term = 0.0;   // sqrt(1/M + M * S)
  double simplified = 0.0;
};

// Approximation error bound at one lambda. M defaults to n^{1/(2 lambda)};
// S_value, when present, replaces the envelope inside the two-term bound (use
// the measured criterion value of an actual rule); xi is forwarded to the
// envelope.
ApproxErrorBound approx_error_bound(const SpaceParams& params, int n, double lambda,
                                    std::optional<double> M = std::nullopt,
                                    std::optional<double> S_value = std::nullopt,
                                    std::optional<double> xi = std::nullopt);

}  // namespace lattice
