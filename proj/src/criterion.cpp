#include "lattice/criterion.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "lattice/util.hpp"

namespace lattice {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double kahan_sum(std::span<const double> xs) {
  double sum = 0.0;
  double comp = 0.0;
  for (double x : xs) {
    const double y = x - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

void check_rule(const CriterionContext& ctx, const GeneratingVector& gv) {
  if (gv.n != ctx.n() || gv.dim() != ctx.d())
    throw std::invalid_argument("rule does not match the criterion context");
  for (int zj : gv.z)
    if (zj < 1 || zj >= gv.n) throw std::invalid_argument("rule components must lie in 1..n-1");
}

void check_components(const CriterionContext& ctx, std::span<const int> z) {
  for (int zj : z)
    if (zj < 1 || zj >= ctx.n()) throw std::invalid_argument("rule components must lie in 1..n-1");
}

void fill_phi(const CriterionContext& ctx, std::int64_t k, std::span<const int> z,
              std::span<double> phi) {
  const std::int64_t n = ctx.n();
  for (std::size_t j = 0; j < z.size(); ++j) phi[j] = ctx.kernel(k * z[j] % n);
}

double mean_square_phi(const CriterionContext& ctx, std::span<const int> z,
                       const SubsetWeights& beta) {
  const int n = ctx.n();
  std::vector<double> sq(static_cast<std::size_t>(n));
  parallel_for(1, n + 1, [&](std::int64_t k) {
    thread_local std::vector<double> phi;
    phi.resize(z.size());
    fill_phi(ctx, k, z, phi);
    const double v = beta.kernel_sum(phi);
    sq[k - 1] = v * v;
  });
  // Fixed-order final reduction keeps the value independent of thread count.
  return kahan_sum(sq) / n;
}

}  // namespace

GeneratingVector make_generating_vector(int n, std::vector<int> z) {
  if (n < 2 || !is_prime(n)) throw std::invalid_argument("rule size must be prime");
  if (z.empty()) throw std::invalid_argument("generating vector must not be empty");
  for (int zj : z)
    if (zj < 1 || zj >= n) throw std::invalid_argument("rule components must lie in 1..n-1");
  return GeneratingVector{n, std::move(z)};
}

CriterionContext::CriterionContext(SpaceParams space, int n, KernelMode mode, double kernel_tol)
    : space_(std::move(space)), n_(n) {
  if (n_ < 2 || !is_prime(n_)) throw std::invalid_argument("rule size must be prime");
  kernel_ = kernel_table(space_.alpha, n_, mode, kernel_tol);
  two_zeta_2alpha_ = 2.0 * riemann_zeta(2.0 * space_.alpha);
  two_zeta_alpha_ = 2.0 * riemann_zeta(space_.alpha);
}

double phi_weighted_sum(const CriterionContext& ctx, int k, const GeneratingVector& gv) {
  check_rule(ctx, gv);
  if (k < 0) throw std::invalid_argument("point index must be nonnegative");
  std::vector<double> phi(gv.z.size());
  fill_phi(ctx, k, gv.z, phi);
  return SubsetWeights::whole(ctx.weights(), ctx.d()).kernel_sum(phi);
}

double S_prefix(const CriterionContext& ctx, std::span<const int> z, const SubsetWeights& beta) {
  if (static_cast<int>(z.size()) != beta.active_dim())
    throw std::invalid_argument("component count must match the weight view");
  if (z.empty()) return 0.0;
  check_components(ctx, z);
  return mean_square_phi(ctx, z, beta) - beta.square_sum(ctx.two_zeta_2alpha());
}

double S_d(const CriterionContext& ctx, const GeneratingVector& gv) {
  check_rule(ctx, gv);
  return S_prefix(ctx, gv.z, SubsetWeights::whole(ctx.weights(), ctx.d()));
}

double S_weighted(const CriterionContext& ctx, std::span<const int> z, const WeightModel& beta) {
  const int s = static_cast<int>(z.size());
  if (beta.dimension() < s)
    throw std::invalid_argument("weight model dimension is smaller than the prefix");
  return S_prefix(ctx, z, SubsetWeights::whole(beta, s));
}

double theta_view(const CriterionContext& ctx, std::span<const int> z, const SubsetWeights& beta) {
  const int s = static_cast<int>(z.size());
  if (s < 1) throw std::invalid_argument("theta needs at least one coordinate");
  if (beta.active_dim() != s)
    throw std::invalid_argument("component count must match the weight view");
  const auto head = z.first(s - 1);
  const SubsetWeights prev = beta.restricted(s - 1);
  const double S_s = S_prefix(ctx, z, beta);
  const double S_head = S_prefix(ctx, head, prev);
  const double S_head_up = S_prefix(ctx, head, prev.with_extra(s));
  return S_s - S_head - ctx.two_zeta_2alpha() * S_head_up;
}

double theta_s(const CriterionContext& ctx, std::span<const int> z, const WeightModel& beta) {
  const int s = static_cast<int>(z.size());
  if (beta.dimension() < s)
    throw std::invalid_argument("weight model dimension is smaller than the prefix");
  return theta_view(ctx, z, SubsetWeights::whole(beta, s));
}

double T_ds(const CriterionContext& ctx, int s, std::span<const int> z) {
  const int d = ctx.d();
  if (s < 0 || s > d) throw std::invalid_argument("prefix length out of range");
  if (static_cast<int>(z.size()) != s) throw std::invalid_argument("component count must be s");
  if (s == 0) return 0.0;
  const WeightModel& w = ctx.weights();
  const double z2 = ctx.two_zeta_2alpha();
  const SubsetWeights view = SubsetWeights::whole(w, s);
  switch (w.kind()) {
    case WeightKind::Product: {
      // Future coordinates factor out of the quadratic form coordinatewise.
      double factor = 1.0;
      for (int j = s; j < d; ++j) {
        const double g = w.product_gammas()[j];
        factor *= 1.0 + z2 * g * g;
      }
      return factor * theta_view(ctx, z, view);
    }
    case WeightKind::OrderDependent: {
      // The C(d-s, t) sets w of size t share one summand.
      double total = 0.0;
      double ct = 1.0;
      double binom = 1.0;
      for (int t = 0; t <= d - s; ++t) {
        total += binom * ct * theta_view(ctx, z, view.with_card_offset(t));
        ct *= z2;
        binom = binom * (d - s - t) / (t + 1);
      }
      return total;
    }
    case WeightKind::POD: {
      // theta is quadratic in the weights, so the product parts of the sets w
      // of size t collect into an elementary symmetric function of gamma_j^2.
      std::vector<double> g2(static_cast<std::size_t>(d - s));
      for (int j = s; j < d; ++j) {
        const double g = w.product_gammas()[j];
        g2[j - s] = g * g;
      }
      const std::vector<double> e = elementary_symmetric(g2);
      double total = 0.0;
      double ct = 1.0;
      for (int t = 0; t <= d - s; ++t) {
        if (e[t] != 0.0) total += ct * e[t] * theta_view(ctx, z, view.with_card_offset(t));
        ct *= z2;
      }
      return total;
    }
    case WeightKind::ExplicitGeneral:
      return T_ds_naive(ctx, s, z);
  }
  return 0.0;
}

double T_ds_naive(const CriterionContext& ctx, int s, std::span<const int> z) {
  const int d = ctx.d();
  if (s < 0 || s > d) throw std::invalid_argument("prefix length out of range");
  if (static_cast<int>(z.size()) != s) throw std::invalid_argument("component count must be s");
  if (s == 0) return 0.0;
  const double z2 = ctx.two_zeta_2alpha();
  const SubsetWeights view = SubsetWeights::whole(ctx.weights(), s);
  const std::uint64_t high = ((std::uint64_t{1} << d) - 1) & ~((std::uint64_t{1} << s) - 1);
  double total = 0.0;
  for (std::uint64_t w = high;; w = (w - 1) & high) {
    total += std::pow(z2, std::popcount(w)) * theta_view(ctx, z, view.with_extra_mask(w));
    if (w == 0) break;
  }
  return total;
}

double worst_case_integration_error(const CriterionContext& ctx, const GeneratingVector& gv) {
  check_rule(ctx, gv);
  const int n = ctx.n();
  const SubsetWeights view = SubsetWeights::whole(ctx.weights(), ctx.d());
  std::vector<double> vals(static_cast<std::size_t>(n));
  parallel_for(1, n + 1, [&](std::int64_t k) {
    thread_local std::vector<double> phi;
    phi.resize(gv.z.size());
    fill_phi(ctx, k, gv.z, phi);
    vals[k - 1] = view.kernel_sum(phi);
  });
  const double e2 = kahan_sum(vals) / n - 1.0;
  if (e2 < -1e-12) throw std::runtime_error("squared integration error came out negative");
  return std::sqrt(std::max(e2, 0.0));
}

EdResult E_d(const CriterionContext& ctx, const GeneratingVector& gv, const IndexSet& A) {
  check_rule(ctx, gv);
  const int n = ctx.n();
  const int d = ctx.d();
  const SubsetWeights view = SubsetWeights::whole(ctx.weights(), d);

  std::vector<double> Phi(static_cast<std::size_t>(n));
  parallel_for(1, n + 1, [&](std::int64_t k) {
    thread_local std::vector<double> phi;
    phi.resize(gv.z.size());
    fill_phi(ctx, k, gv.z, phi);
    Phi[k - 1] = view.kernel_sum(phi);
  });

  std::vector<int> cls(A.size());
  std::vector<char> wanted(static_cast<std::size_t>(n), 0);
  for (std::size_t i = 0; i < A.size(); ++i) {
    const FrequencyIndex& h = A.indices[i];
    if (h.dim() != d) throw std::invalid_argument("index set dimension does not match");
    std::int64_t dot = 0;
    for (int j = 0; j < d; ++j) dot += static_cast<std::int64_t>(h.h[j]) * gv.z[j];
    cls[i] = static_cast<int>(((dot % n) + n) % n);
    wanted[cls[i]] = 1;
  }
  std::vector<int> targets;
  for (int m = 0; m < n; ++m)
    if (wanted[m]) targets.push_back(m);

  // Class sums C_m = sum_{g.z = m mod n} 1/r(g) through the inverse transform
  // of Phi. The mirrored kernel table makes Phi(k) = Phi(n-k) exactly, so the
  // imaginary parts cancel pairwise up to roundoff.
  std::vector<std::complex<double>> root(static_cast<std::size_t>(n));
  for (int j = 0; j <= n / 2; ++j) root[j] = std::polar(1.0, -kTwoPi * j / n);
  for (int j = n / 2 + 1; j < n; ++j) root[j] = std::conj(root[n - j]);
  std::vector<double> C(static_cast<std::size_t>(n), 0.0);
  parallel_for(0, static_cast<std::int64_t>(targets.size()), [&](std::int64_t i) {
    const int m = targets[i];
    std::complex<double> acc = 0.0;
    for (std::int64_t k = 1; k <= n; ++k) acc += Phi[k - 1] * root[k * m % n];
    const double re = acc.real() / n;
    const double im = acc.imag() / n;
    if (std::abs(im) > 1e-10 * std::max(1.0, std::abs(re)))
      throw std::runtime_error("class sum transform has a nonreal residue");
    C[m] = re;
  });

  std::vector<double> terms(A.size());
  for (std::size_t i = 0; i < A.size(); ++i)
    terms[i] = C[cls[i]] - 1.0 / r_factor(ctx.space(), A.indices[i]);

  EdResult out;
  out.value = kahan_sum(terms);
  const double g1 = ctx.weights().gamma(std::uint64_t{1});
  out.n_too_small = g1 > 0.0 && std::pow(n - 1.0, ctx.alpha()) / g1 <= A.M;
  return out;
}

EdResult E_d(const CriterionContext& ctx, const GeneratingVector& gv, double M,
             std::int64_t index_budget) {
  return E_d(ctx, gv, enumerate_index_set(ctx.space(), M, index_budget));
}

namespace {

void check_box_budget(int s, std::int64_t H, std::int64_t budget) {
  if (H < 1) throw std::invalid_argument("oracle box radius must be at least 1");
  if (H > 10'000'000) throw BudgetError("box oracle: radius too large for coordinate tables");
  if (s > 20) throw BudgetError("box oracle: dimension too large for dense weights");
  const double points = std::pow(2.0 * static_cast<double>(H) + 1.0, s);
  if (points > static_cast<double>(budget))
    throw BudgetError("box oracle: " + format_double(points) + " points exceed the budget of " +
                      std::to_string(budget));
}

std::vector<double> dense_weights(const SubsetWeights& beta) {
  std::vector<double> wt(std::uint64_t{1} << beta.active_dim());
  for (std::uint64_t u = 0; u < wt.size(); ++u) wt[u] = beta(u);
  return wt;
}

// Calls visit(class of h.z mod n, last component, rho(h)) for every h in
// [-H,H]^s with nonzero weight, where rho(h) = beta_supp(h) / prod |h_j|^alpha.
template <typename Visit>
void walk_box(std::span<const int> z, int n, double alpha, const std::vector<double>& wt,
              std::int64_t H, Visit&& visit) {
  const int s = static_cast<int>(z.size());
  if (s == 0) {
    visit(0, 0, wt[0]);
    return;
  }
  std::vector<double> invpow(static_cast<std::size_t>(H) + 1, 1.0);
  for (std::int64_t m = 1; m <= H; ++m) invpow[m] = std::pow(static_cast<double>(m), -alpha);
  auto rec = [&](auto&& self, int j, std::uint64_t mask, double prod, std::int64_t dot) -> void {
    const std::int64_t zj = z[j];
    for (std::int64_t t = -H; t <= H; ++t) {
      const std::uint64_t mask2 = t == 0 ? mask : mask | (std::uint64_t{1} << j);
      const double prod2 = t == 0 ? prod : prod * invpow[t < 0 ? -t : t];
      const std::int64_t dot2 = dot + t * zj;
      if (j + 1 == s) {
        const double w = wt[mask2];
        if (w != 0.0) {
          const int cls = static_cast<int>(((dot2 % n) + n) % n);
          visit(cls, static_cast<int>(t), w * prod2);
        }
      } else {
        self(self, j + 1, mask2, prod2, dot2);
      }
    }
  };
  rec(rec, 0, 0, 1.0, 0);
}

// Upper bound on the weight mass outside the box by a union bound over the
// escaping coordinate; the one-dimensional tail uses the integral majorant
// 2 H^{1-alpha}/(alpha-1) so no cancellation can push it below the truth.
double out_of_box_mass(const SubsetWeights& beta, double alpha, double two_zeta_a,
                       std::int64_t H) {
  const double tail1 = 2.0 * std::pow(static_cast<double>(H), 1.0 - alpha) / (alpha - 1.0);
  const double p_card = beta.pow_sum(1.0, two_zeta_a, CardFactor::Card) / two_zeta_a;
  return tail1 * p_card;
}

double pair_tail(double t_in, double max_bucket, double t_out) {
  // Pairs missing at least one member in the box: one side out of the box
  // against a full class sum, plus the side with the box member out.
  return t_out * (max_bucket + t_out) + t_in * t_out;
}

}  // namespace

OracleValue S_d_oracle(const CriterionContext& ctx, const GeneratingVector& gv, std::int64_t H) {
  check_rule(ctx, gv);
  if (H < ctx.n())
    throw std::invalid_argument("oracle box must cover one full period, H >= n");
  check_box_budget(ctx.d(), H, ctx.oracle_budget);
  const int n = ctx.n();
  const SubsetWeights view = SubsetWeights::whole(ctx.weights(), ctx.d());
  const std::vector<double> wt = dense_weights(view);

  std::vector<double> bucket(static_cast<std::size_t>(n), 0.0);
  double diag = 0.0;
  walk_box(gv.z, n, ctx.alpha(), wt, H, [&](int cls, int, double rho) {
    bucket[cls] += rho;
    diag += rho * rho;
  });

  double sumsq = 0.0;
  double t_in = 0.0;
  double max_bucket = 0.0;
  for (double b : bucket) {
    sumsq += b * b;
    t_in += b;
    max_bucket = std::max(max_bucket, b);
  }
  const double t_out = out_of_box_mass(view, ctx.alpha(), ctx.two_zeta_alpha(), H);
  return {sumsq - diag, pair_tail(t_in, max_bucket, t_out)};
}

OracleValue theta_oracle(const CriterionContext& ctx, std::span<const int> z,
                         const SubsetWeights& beta, std::int64_t H) {
  const int s = static_cast<int>(z.size());
  if (s < 1) throw std::invalid_argument("theta needs at least one coordinate");
  if (beta.active_dim() != s)
    throw std::invalid_argument("component count must match the weight view");
  check_components(ctx, z);
  check_box_budget(s, H, ctx.oracle_budget);
  const int n = ctx.n();
  const std::int64_t rows = 2 * H + 1;
  if (rows * n > 60'000'000) throw BudgetError("theta oracle: class table too large");
  const std::vector<double> wt = dense_weights(beta);

  // One bucket per (last component, residue class); equal-last pairs are the
  // l_s = 0 part of S and drop out of the sum below.
  std::vector<double> table(static_cast<std::size_t>(rows * n), 0.0);
  walk_box(z, n, ctx.alpha(), wt, H, [&](int cls, int last, double rho) {
    table[static_cast<std::size_t>(last + H) * n + cls] += rho;
  });

  double theta = 0.0;
  double t_in = 0.0;
  double max_bucket = 0.0;
  for (int m = 0; m < n; ++m) {
    double tot = 0.0;
    double sq = 0.0;
    for (std::int64_t t = 0; t < rows; ++t) {
      const double b = table[static_cast<std::size_t>(t) * n + m];
      tot += b;
      sq += b * b;
    }
    theta += tot * tot - sq;
    t_in += tot;
    max_bucket = std::max(max_bucket, tot);
  }
  const double t_out = out_of_box_mass(beta, ctx.alpha(), ctx.two_zeta_alpha(), H);
  return {theta, pair_tail(t_in, max_bucket, t_out)};
}

OracleValue integration_error_squared_oracle(const CriterionContext& ctx,
                                             const GeneratingVector& gv, std::int64_t H) {
  check_rule(ctx, gv);
  check_box_budget(ctx.d(), H, ctx.oracle_budget);
  const int n = ctx.n();
  const SubsetWeights view = SubsetWeights::whole(ctx.weights(), ctx.d());
  const std::vector<double> wt = dense_weights(view);

  std::vector<double> bucket(static_cast<std::size_t>(n), 0.0);
  walk_box(gv.z, n, ctx.alpha(), wt, H,
           [&](int cls, int, double rho) { bucket[cls] += rho; });
  const double t_out = out_of_box_mass(view, ctx.alpha(), ctx.two_zeta_alpha(), H);
  return {bucket[0] - 1.0, t_out};
}

OracleValue E_d_oracle(const CriterionContext& ctx, const GeneratingVector& gv, const IndexSet& A,
                       std::int64_t H) {
  check_rule(ctx, gv);
  check_box_budget(ctx.d(), H, ctx.oracle_budget);
  const int n = ctx.n();
  const int d = ctx.d();
  for (const FrequencyIndex& h : A.indices) {
    if (h.dim() != d) throw std::invalid_argument("index set dimension does not match");
    for (int c : h.h)
      if (std::abs(c) > H) throw std::invalid_argument("oracle box must cover the index set");
  }
  const SubsetWeights view = SubsetWeights::whole(ctx.weights(), d);
  const std::vector<double> wt = dense_weights(view);

  std::vector<double> bucket(static_cast<std::size_t>(n), 0.0);
  walk_box(gv.z, n, ctx.alpha(), wt, H,
           [&](int cls, int, double rho) { bucket[cls] += rho; });

  std::vector<double> terms(A.size());
  for (std::size_t i = 0; i < A.size(); ++i) {
    const FrequencyIndex& h = A.indices[i];
    std::int64_t dot = 0;
    for (int j = 0; j < d; ++j) dot += static_cast<std::int64_t>(h.h[j]) * gv.z[j];
    const int cls = static_cast<int>(((dot % n) + n) % n);
    terms[i] = bucket[cls] - 1.0 / r_factor(ctx.space(), h);
  }
  const double t_out = out_of_box_mass(view, ctx.alpha(), ctx.two_zeta_alpha(), H);
  return {kahan_sum(terms), t_out * static_cast<double>(A.size())};
}

}  // namespace lattice
