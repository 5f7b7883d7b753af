#include "lattice/korobov.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace lattice {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Bernoulli numbers B_0..B_kMaxBernoulli via the defining recurrence.
constexpr int kMaxBernoulli = 60;

const std::vector<double>& bernoulli_numbers() {
  static const std::vector<double> cache = [] {
    std::vector<double> b(kMaxBernoulli + 1, 0.0);
    b[0] = 1.0;
    b[1] = -0.5;
    std::vector<double> binom(kMaxBernoulli + 2, 0.0);
    for (int m = 2; m <= kMaxBernoulli; ++m) {
      // binom[j] = C(m+1, j)
      binom[0] = 1.0;
      for (int j = 1; j <= m; ++j) binom[j] = binom[j - 1] * (m + 2 - j) / j;
      double acc = 0.0;
      for (int j = 0; j < m; ++j) acc += binom[j] * b[j];
      b[m] = -acc / (m + 1);
    }
    return b;
  }();
  return cache;
}

double phi_even_closed_form(int alpha, double x) {
  // 2 sum cos(2 pi m x)/m^alpha = (-1)^{alpha/2+1} (2 pi)^alpha B_alpha(x) / alpha!
  const double sign = (alpha / 2) % 2 == 1 ? 1.0 : -1.0;
  double factor = 1.0;
  for (int i = 1; i <= alpha; ++i) factor *= kTwoPi / i;
  return sign * factor * bernoulli_polynomial(alpha, x);
}

// Tail sum 2 Re sum_{m>N} m^{-alpha} e^{2 pi i m x} via repeated summation by
// parts: G(b) = E^{N+1}/(1-E) b_{N+1} - E/(1-E) G(db). Forward differences of
// m^{-alpha} are nonnegative and telescoping, which gives the remainder bound
// |w|^K d^{K-1}b_{N+1} after K terms.
double phi_series(double alpha, double x, double tol) {
  const double sin_pix = std::sin(std::numbers::pi * x);
  const double absw = 0.5 / sin_pix;
  const std::complex<double> e = std::polar(1.0, kTwoPi * x);
  const std::complex<double> w = e / (1.0 - e);
  constexpr int kMaxDepth = 10;

  std::int64_t n = std::max<std::int64_t>(
      64, static_cast<std::int64_t>(std::ceil(4.0 * (alpha + 12.0) * absw)));
  for (;; n *= 2) {
    if (n > 8'000'000)
      throw std::runtime_error("kernel series: requested tolerance not attainable");

    double sum = 0.0, comp = 0.0;  // Kahan
    for (std::int64_t m = 1; m <= n; ++m) {
      double mx = static_cast<double>(m) * x;
      mx -= std::floor(mx);
      const double term = std::cos(kTwoPi * mx) * std::pow(static_cast<double>(m), -alpha);
      const double y = term - comp;
      const double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
    }

    double diff[kMaxDepth + 2];
    for (int i = 0; i <= kMaxDepth + 1; ++i)
      diff[i] = std::pow(static_cast<double>(n + 1 + i), -alpha);
    const double noise_floor = 64.0 * std::numeric_limits<double>::epsilon() * diff[0];

    double npx = (static_cast<double>(n) + 1.0) * x;
    npx -= std::floor(npx);
    const std::complex<double> c0 = std::polar(1.0, kTwoPi * npx) / (1.0 - e);

    std::complex<double> tail = 0.0, wk = 1.0;
    double wabs = 1.0;
    int levels = kMaxDepth + 1;
    for (int k = 0; k <= kMaxDepth; ++k) {
      tail += wk * diff[0];
      wabs *= absw;
      const double bound = 2.0 * wabs * diff[0];  // after terms 0..k
      if (bound <= tol) return 2.0 * (sum + (c0 * tail).real());
      if (diff[0] <= noise_floor) break;  // higher differences are roundoff
      --levels;
      for (int i = 0; i <= levels; ++i) diff[i] -= diff[i + 1];
      wk *= -w;
    }
    // Not converged at this truncation point; double it.
  }
}

}  // namespace

SpaceParams make_space_params(double alpha, int d, WeightModel weights) {
  if (!(alpha > 1.0)) throw std::invalid_argument("alpha must exceed 1");
  if (weights.dimension() != d)
    throw std::invalid_argument("weight model dimension must match d");
  return SpaceParams{alpha, d, std::move(weights)};
}

std::uint64_t FrequencyIndex::support_mask() const {
  std::uint64_t m = 0;
  for (int j = 0; j < dim(); ++j) {
    if (h[j] != 0) m |= std::uint64_t{1} << j;
  }
  return m;
}

bool frequency_order(const FrequencyIndex& a, const FrequencyIndex& b) {
  const std::uint64_t ma = a.support_mask(), mb = b.support_mask();
  const int ca = std::popcount(ma), cb = std::popcount(mb);
  if (ca != cb) return ca < cb;
  if (ma != mb) return ma < mb;
  return a.h < b.h;
}

double riemann_zeta(double x) {
  if (!(x > 1.0)) throw std::domain_error("zeta diverges for x <= 1");
  constexpr int N = 32, J = 12;
  const auto& b = bernoulli_numbers();

  double acc = 0.0;
  for (int m = 1; m < N; ++m) acc += std::pow(static_cast<double>(m), -x);
  acc += 0.5 * std::pow(static_cast<double>(N), -x);
  acc += std::pow(static_cast<double>(N), 1.0 - x) / (x - 1.0);

  // sum_j B_{2j}/(2j)! (x)(x+1)...(x+2j-2) N^{-x-2j+1}
  double fact = 1.0, poch = 1.0;
  double npow = std::pow(static_cast<double>(N), -x + 1.0);
  for (int j = 1; j <= J; ++j) {
    fact *= (2.0 * j - 1.0) * (2.0 * j);
    poch *= (j == 1) ? x : (x + 2.0 * j - 3.0) * (x + 2.0 * j - 2.0);
    npow /= static_cast<double>(N) * N;
    acc += b[2 * j] / fact * poch * npow;
  }
  return acc;
}

double bernoulli_polynomial(int order, double x) {
  switch (order) {
    case 2: return (x - 1.0) * x + 1.0 / 6.0;
    case 4: return ((x * x - 2.0 * x + 1.0) * x * x) - 1.0 / 30.0;
    case 6:
      return ((((x - 3.0) * x + 2.5) * x * x - 0.5) * x * x) + 1.0 / 42.0;
    case 8:
      return ((((x * x - 4.0 * x + 14.0 / 3.0) * x * x - 7.0 / 3.0) * x * x + 2.0 / 3.0) * x * x) -
             1.0 / 30.0;
    default: break;
  }
  if (order < 0 || order > kMaxBernoulli)
    throw std::invalid_argument("bernoulli polynomial order out of range");
  const auto& b = bernoulli_numbers();
  // B_n(x) = sum_k C(n,k) B_k x^{n-k}
  double acc = 0.0, binom = 1.0;
  for (int k = 0; k <= order; ++k) {
    acc += binom * b[k] * std::pow(x, static_cast<double>(order - k));
    binom = binom * (order - k) / (k + 1);
  }
  return acc;
}

double kernel_phi(double alpha, double x, KernelMode mode, double tol) {
  if (!(alpha > 1.0)) throw std::domain_error("kernel requires alpha > 1");
  if (!(x >= 0.0 && x < 1.0)) throw std::invalid_argument("kernel argument must lie in [0,1)");
  const bool even_integer = alpha == std::floor(alpha) && static_cast<std::int64_t>(alpha) % 2 == 0;
  if (mode == KernelMode::Bernoulli && !even_integer)
    throw std::invalid_argument("closed-form kernel requires even integer alpha");
  if (x == 0.0) return 2.0 * riemann_zeta(alpha);
  if (mode != KernelMode::TruncatedSeries && even_integer)
    return phi_even_closed_form(static_cast<int>(alpha), x);
  return phi_series(alpha, x, tol);
}

std::vector<double> kernel_table(double alpha, int n, KernelMode mode, double tol) {
  if (n < 1) throw std::invalid_argument("kernel table needs n >= 1");
  std::vector<double> kappa(n);
  kappa[0] = 2.0 * riemann_zeta(alpha);
  for (int m = 1; 2 * m <= n; ++m) {
    const double v = kernel_phi(alpha, static_cast<double>(m) / n, mode, tol);
    kappa[m] = v;
    kappa[n - m] = v;
  }
  return kappa;
}

double r_prime_factor(double alpha, const FrequencyIndex& h) {
  double prod = 1.0;
  for (int v : h.h) {
    if (v != 0) prod *= std::pow(std::abs(static_cast<double>(v)), alpha);
  }
  return prod;
}

double r_factor(const SpaceParams& params, const FrequencyIndex& h) {
  if (h.dim() != params.d) throw std::invalid_argument("index dimension mismatch");
  const double g = params.weights.gamma(h.support_mask());
  if (g == 0.0) return std::numeric_limits<double>::infinity();
  return r_prime_factor(params.alpha, h) / g;
}

void FourierPolynomial::set_coefficient(const FrequencyIndex& h, std::complex<double> c) {
  if (h.dim() != d_) throw std::invalid_argument("index dimension mismatch");
  if (c == std::complex<double>(0.0, 0.0)) {
    terms_.erase(h.h);
  } else {
    terms_[h.h] = c;
  }
}

void FourierPolynomial::add_coefficient(const FrequencyIndex& h, std::complex<double> c) {
  if (h.dim() != d_) throw std::invalid_argument("index dimension mismatch");
  auto [it, inserted] = terms_.emplace(h.h, c);
  if (!inserted) {
    it->second += c;
    if (it->second == std::complex<double>(0.0, 0.0)) terms_.erase(it);
  }
}

std::complex<double> FourierPolynomial::coefficient(const FrequencyIndex& h) const {
  auto it = terms_.find(h.h);
  return it == terms_.end() ? std::complex<double>(0.0, 0.0) : it->second;
}

std::complex<double> FourierPolynomial::eval(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != d_) throw std::invalid_argument("point dimension mismatch");
  std::complex<double> acc = 0.0;
  for (const auto& [h, c] : terms_) {
    double dot = 0.0;
    for (int j = 0; j < d_; ++j) dot += h[j] * x[j];
    acc += c * std::polar(1.0, kTwoPi * dot);
  }
  return acc;
}

double FourierPolynomial::eval_real(std::span<const double> x) const {
  const std::complex<double> v = eval(x);
  double mass = 0.0;
  for (const auto& [h, c] : terms_) mass += std::abs(c);
  if (std::abs(v.imag()) > 1e-9 * std::max(1.0, mass))
    throw std::domain_error("polynomial is not real-valued at the requested point");
  return v.real();
}

void FourierPolynomial::scale(double factor) {
  for (auto& [h, c] : terms_) c *= factor;
}

bool FourierPolynomial::is_conjugate_symmetric(double tol) const {
  for (const auto& [h, c] : terms_) {
    std::vector<int> neg(h.size());
    for (std::size_t j = 0; j < h.size(); ++j) neg[j] = -h[j];
    auto it = terms_.find(neg);
    const std::complex<double> mirror = it == terms_.end() ? 0.0 : it->second;
    if (std::abs(mirror - std::conj(c)) > tol * std::max(1.0, std::abs(c))) return false;
  }
  return true;
}

double norm_squared(const SpaceParams& params, const FourierPolynomial& f) {
  if (f.dim() != params.d) throw std::invalid_argument("polynomial dimension mismatch");
  double acc = 0.0;
  for (const auto& [h, c] : f.terms()) {
    const FrequencyIndex idx{h};
    const double r = r_factor(params, idx);
    if (std::isinf(r)) {
      if (std::abs(c) > 0.0)
        throw std::domain_error("function outside the space: zero-weight support with nonzero coefficient");
      continue;
    }
    acc += std::norm(c) * r;
  }
  return acc;
}

double l2_norm_squared(const FourierPolynomial& f) {
  double acc = 0.0;
  for (const auto& [h, c] : f.terms()) acc += std::norm(c);
  return acc;
}

}  // namespace lattice
