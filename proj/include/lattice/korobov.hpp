#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "lattice/weights.hpp"

namespace lattice {

// Smoothness alpha > 1, dimension d, and weights over subsets of {1:d}.
struct SpaceParams {
  double alpha;
  int d;
  WeightModel weights;
};

SpaceParams make_space_params(double alpha, int d, WeightModel weights);

struct FrequencyIndex {
  std::vector<int> h;

  int dim() const { return static_cast<int>(h.size()); }
  std::uint64_t support_mask() const;
  bool operator==(const FrequencyIndex&) const = default;
};

// Orders by (support cardinality, support, components); used for index-set dumps.
bool frequency_order(const FrequencyIndex& a, const FrequencyIndex& b);

// Riemann zeta for real x > 1 via Euler-Maclaurin; absolute error <= 1e-13.
double riemann_zeta(double x);

// Bernoulli polynomial B_order(x); closed forms for orders 2, 4, 6, 8,
// the defining recurrence beyond.
double bernoulli_polynomial(int order, double x);

enum class KernelMode { Auto, Bernoulli, TruncatedSeries };

// phi_alpha(x) = 2 sum_{m>=1} cos(2 pi m x) / m^alpha on [0,1).
// Auto uses the Bernoulli closed form for even integer alpha and the
// accelerated truncated series (tail bound <= tol) otherwise.
double kernel_phi(double alpha, double x, KernelMode mode = KernelMode::Auto,
                  double tol = 1e-12);

// kappa[m] = phi_alpha(m/n) for m = 0..n-1, filled symmetrically so that
// kappa[m] and kappa[n-m] are bitwise equal.
std::vector<double> kernel_table(double alpha, int n, KernelMode mode = KernelMode::Auto,
                                 double tol = 1e-12);

// r(h) = (1/gamma_supp(h)) prod_{j in supp(h)} |h_j|^alpha; +infinity when
// gamma_supp(h) = 0, and 1 for h = 0.
double r_factor(const SpaceParams& params, const FrequencyIndex& h);

// prod_{j in supp(h)} |h_j|^alpha (the weight-free part of r).
double r_prime_factor(double alpha, const FrequencyIndex& h);

// Finite trigonometric polynomial sum_h c_h e^{2 pi i h.x}.
class FourierPolynomial {
 public:
  explicit FourierPolynomial(int d) : d_(d) {}

  int dim() const { return d_; }
  std::size_t term_count() const { return terms_.size(); }

  void set_coefficient(const FrequencyIndex& h, std::complex<double> c);
  void add_coefficient(const FrequencyIndex& h, std::complex<double> c);
  std::complex<double> coefficient(const FrequencyIndex& h) const;

  const std::map<std::vector<int>, std::complex<double>>& terms() const { return terms_; }

  std::complex<double> eval(std::span<const double> x) const;
  // Evaluation for real-valued polynomials; throws if the imaginary residue
  // exceeds 1e-9.
  double eval_real(std::span<const double> x) const;

  void scale(double factor);
  // c_{-h} == conj(c_h) for every stored term, within tol.
  bool is_conjugate_symmetric(double tol = 1e-12) const;

 private:
  int d_;
  std::map<std::vector<int>, std::complex<double>> terms_;
};

// sum_h |c_h|^2 r(h); throws std::domain_error if some term has
// gamma_supp(h) = 0 and a nonzero coefficient (the function is then outside
// the space).
double norm_squared(const SpaceParams& params, const FourierPolynomial& f);

// sum_h |c_h|^2.
double l2_norm_squared(const FourierPolynomial& f);

}  // namespace lattice
