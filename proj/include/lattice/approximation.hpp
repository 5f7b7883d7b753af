#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "lattice/criterion.hpp"
#include "lattice/index_set.hpp"
#include "lattice/korobov.hpp"

namespace lattice {

using SampleFunction = std::function<std::complex<double>(std::span<const double>)>;

// The rank-1 points {k z / n}, k = 1..n, coordinates as exact fractions.
std::vector<std::vector<double>> lattice_points(const GeneratingVector& gv);

std::vector<std::complex<double>> sample_function(const GeneratingVector& gv,
                                                  const SampleFunction& f);

// Exact samples from the coefficient list via roots of unity.
std::vector<std::complex<double>> sample_polynomial(const GeneratingVector& gv,
                                                    const FourierPolynomial& f);

// Samples of prod_j (1 + c_j phi_alpha(x_j)) using the context kernel table.
std::vector<std::complex<double>> sample_kernel_product(const CriterionContext& ctx,
                                                        const GeneratingVector& gv,
                                                        std::span<const double> coeffs);

// The lattice algorithm: approximate coefficient of h in A is the dual sum
// v_m = (1/n) sum_k f(x_k) e(-k m / n) at the residue m = h.z mod n.
FourierPolynomial apply_lattice_algorithm(const GeneratingVector& gv,
                                          std::span<const std::complex<double>> samples,
                                          const IndexSet& A);

// sqrt of sum |f_h - g_h|^2 over the union of the two spectra.
double l2_distance(const FourierPolynomial& f, const FourierPolynomial& g);

// L2 error of the lattice approximation of a trigonometric polynomial,
// evaluated from the coefficient table alone: approximate coefficients are
// residue-class sums of the true ones, so no sampling or roundoff from the
// dual transform enters.
double exact_l2_error(const FourierPolynomial& f, const GeneratingVector& gv, const IndexSet& A);

// Coefficient of the kernel product function: prod_{j in supp} c_j / |h_j|^alpha.
double kernel_product_coefficient(double alpha, std::span<const double> coeffs,
                                  std::span<const int> h);

// L2 error of an approximation fa against the full kernel product function,
// using its closed-form spectrum; no truncation enters.
double kernel_product_l2_error(double alpha, std::span<const double> coeffs,
                               const FourierPolynomial& fa);

// Real-valued trigonometric polynomial with spectrum A_d(M_f), coefficient
// magnitude 1/r(h), and seeded random phases tied across conjugate pairs.
FourierPolynomial random_polynomial(const SpaceParams& params, double M_f, std::uint64_t seed);

}  // namespace lattice
