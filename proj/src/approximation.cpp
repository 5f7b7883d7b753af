#include "lattice/approximation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include "lattice/util.hpp"

namespace lattice {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// e(j/n) for j = 0..n-1 with exact conjugate mirroring.
std::vector<std::complex<double>> unit_roots(int n) {
  std::vector<std::complex<double>> root(static_cast<std::size_t>(n));
  for (int j = 0; j <= n / 2; ++j) root[j] = std::polar(1.0, kTwoPi * j / n);
  for (int j = n / 2 + 1; j < n; ++j) root[j] = std::conj(root[n - j]);
  return root;
}

std::int64_t residue(std::span<const int> h, std::span<const int> z, int n) {
  std::int64_t dot = 0;
  for (std::size_t j = 0; j < h.size(); ++j) dot += static_cast<std::int64_t>(h[j]) * z[j];
  return ((dot % n) + n) % n;
}

}  // namespace

std::vector<std::vector<double>> lattice_points(const GeneratingVector& gv) {
  const int n = gv.n;
  std::vector<std::vector<double>> pts(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) {
    std::vector<double> x(gv.z.size());
    for (std::size_t j = 0; j < gv.z.size(); ++j) {
      const std::int64_t m = static_cast<std::int64_t>(k) * gv.z[j] % n;
      x[j] = static_cast<double>(m) / n;
    }
    pts[k - 1] = std::move(x);
  }
  return pts;
}

std::vector<std::complex<double>> sample_function(const GeneratingVector& gv,
                                                  const SampleFunction& f) {
  const std::vector<std::vector<double>> pts = lattice_points(gv);
  std::vector<std::complex<double>> out(pts.size());
  parallel_for(0, static_cast<std::int64_t>(pts.size()),
               [&](std::int64_t k) { out[k] = f(pts[k]); });
  return out;
}

std::vector<std::complex<double>> sample_polynomial(const GeneratingVector& gv,
                                                    const FourierPolynomial& f) {
  const int n = gv.n;
  if (f.dim() != gv.dim()) throw std::invalid_argument("polynomial dimension does not match");
  const std::vector<std::complex<double>> root = unit_roots(n);
  std::vector<std::complex<double>> out(static_cast<std::size_t>(n), 0.0);
  for (const auto& [h, c] : f.terms()) {
    const std::int64_t m = residue(h, gv.z, n);
    for (std::int64_t k = 1; k <= n; ++k) out[k - 1] += c * root[k * m % n];
  }
  return out;
}

std::vector<std::complex<double>> sample_kernel_product(const CriterionContext& ctx,
                                                        const GeneratingVector& gv,
                                                        std::span<const double> coeffs) {
  if (gv.n != ctx.n()) throw std::invalid_argument("rule does not match the criterion context");
  if (coeffs.size() != gv.z.size())
    throw std::invalid_argument("coefficient count must match the dimension");
  const int n = gv.n;
  std::vector<std::complex<double>> out(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) {
    double v = 1.0;
    for (std::size_t j = 0; j < coeffs.size(); ++j)
      v *= 1.0 + coeffs[j] * ctx.kernel(static_cast<std::int64_t>(k) * gv.z[j] % n);
    out[k - 1] = v;
  }
  return out;
}

FourierPolynomial apply_lattice_algorithm(const GeneratingVector& gv,
                                          std::span<const std::complex<double>> samples,
                                          const IndexSet& A) {
  const int n = gv.n;
  if (static_cast<int>(samples.size()) != n)
    throw std::invalid_argument("sample count must equal the rule size");
  const std::vector<std::complex<double>> root = unit_roots(n);

  std::vector<std::complex<double>> dual(static_cast<std::size_t>(n));
  parallel_for(0, n, [&](std::int64_t m) {
    std::complex<double> acc = 0.0;
    for (std::int64_t k = 1; k <= n; ++k) acc += samples[k - 1] * std::conj(root[k * m % n]);
    dual[m] = acc / static_cast<double>(n);
  });

  FourierPolynomial fa(gv.dim());
  for (const FrequencyIndex& h : A.indices) {
    if (h.dim() != gv.dim()) throw std::invalid_argument("index set dimension does not match");
    fa.set_coefficient(h, dual[residue(h.h, gv.z, n)]);
  }
  return fa;
}

double exact_l2_error(const FourierPolynomial& f, const GeneratingVector& gv, const IndexSet& A) {
  const int n = gv.n;
  if (f.dim() != gv.dim()) throw std::invalid_argument("polynomial dimension does not match");
  // The algorithm reproduces, at each h in A, the sum of the true coefficients
  // over the residue class h.z mod n; everything outside A is dropped.
  std::vector<std::complex<double>> class_sum(static_cast<std::size_t>(n), 0.0);
  for (const auto& [h, c] : f.terms()) class_sum[residue(h, gv.z, n)] += c;

  std::set<std::vector<int>> in_A;
  double acc = 0.0;
  for (const FrequencyIndex& h : A.indices) {
    if (h.dim() != gv.dim()) throw std::invalid_argument("index set dimension does not match");
    in_A.insert(h.h);
    acc += std::norm(f.coefficient(h) - class_sum[residue(h.h, gv.z, n)]);
  }
  for (const auto& [h, c] : f.terms())
    if (!in_A.contains(h)) acc += std::norm(c);
  return std::sqrt(acc);
}

double l2_distance(const FourierPolynomial& f, const FourierPolynomial& g) {
  if (f.dim() != g.dim()) throw std::invalid_argument("polynomial dimensions differ");
  double acc = 0.0;
  auto it = f.terms().begin();
  auto jt = g.terms().begin();
  while (it != f.terms().end() || jt != g.terms().end()) {
    if (jt == g.terms().end() || (it != f.terms().end() && it->first < jt->first)) {
      acc += std::norm(it->second);
      ++it;
    } else if (it == f.terms().end() || jt->first < it->first) {
      acc += std::norm(jt->second);
      ++jt;
    } else {
      acc += std::norm(it->second - jt->second);
      ++it;
      ++jt;
    }
  }
  return std::sqrt(acc);
}

double kernel_product_coefficient(double alpha, std::span<const double> coeffs,
                                  std::span<const int> h) {
  if (coeffs.size() != h.size())
    throw std::invalid_argument("coefficient count must match the dimension");
  double v = 1.0;
  for (std::size_t j = 0; j < h.size(); ++j)
    if (h[j] != 0) v *= coeffs[j] * std::pow(std::abs(static_cast<double>(h[j])), -alpha);
  return v;
}

double kernel_product_l2_error(double alpha, std::span<const double> coeffs,
                               const FourierPolynomial& fa) {
  if (static_cast<int>(coeffs.size()) != fa.dim())
    throw std::invalid_argument("coefficient count must match the dimension");
  const double z2 = 2.0 * riemann_zeta(2.0 * alpha);
  double norm_f2 = 1.0;
  for (double c : coeffs) norm_f2 *= 1.0 + z2 * c * c;
  double cross = 0.0;
  double norm_a2 = 0.0;
  for (const auto& [h, c] : fa.terms()) {
    cross += kernel_product_coefficient(alpha, coeffs, h) * c.real();
    norm_a2 += std::norm(c);
  }
  const double e2 = norm_f2 - 2.0 * cross + norm_a2;
  if (e2 < -1e-10 * norm_f2) throw std::runtime_error("squared error came out negative");
  return std::sqrt(std::max(e2, 0.0));
}

FourierPolynomial random_polynomial(const SpaceParams& params, double M_f, std::uint64_t seed) {
  const IndexSet A = enumerate_index_set(params, M_f);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  FourierPolynomial f(params.d);
  for (const FrequencyIndex& h : A.indices) {
    auto first_nonzero = std::find_if(h.h.begin(), h.h.end(), [](int c) { return c != 0; });
    if (first_nonzero == h.h.end()) {
      f.set_coefficient(h, (rng() & 1) != 0 ? 1.0 : -1.0);
      continue;
    }
    if (*first_nonzero < 0) continue;  // filled together with its mirror
    const std::complex<double> c = std::polar(1.0 / r_factor(params, h), angle(rng));
    FrequencyIndex neg{std::vector<int>(h.h.size())};
    for (std::size_t j = 0; j < h.h.size(); ++j) neg.h[j] = -h.h[j];
    f.set_coefficient(h, c);
    f.set_coefficient(neg, std::conj(c));
  }
  return f;
}

}  // namespace lattice
