#include "lattice/cbc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "lattice/util.hpp"

namespace lattice {

namespace {

// T_{d,s} as a weighted family of theta summands, one per grouped set of
// future coordinates.
struct ThetaTerm {
  double coeff = 0.0;
  SubsetWeights beta;
};

std::vector<ThetaTerm> theta_terms(const CriterionContext& ctx, int s) {
  const int d = ctx.d();
  const WeightModel& w = ctx.weights();
  const double z2 = ctx.two_zeta_2alpha();
  const SubsetWeights view = SubsetWeights::whole(w, s);
  std::vector<ThetaTerm> terms;
  switch (w.kind()) {
    case WeightKind::Product: {
      double factor = 1.0;
      for (int j = s; j < d; ++j) {
        const double g = w.product_gammas()[j];
        factor *= 1.0 + z2 * g * g;
      }
      terms.push_back({factor, view});
      break;
    }
    case WeightKind::OrderDependent: {
      double ct = 1.0;
      double binom = 1.0;
      for (int t = 0; t <= d - s; ++t) {
        terms.push_back({binom * ct, view.with_card_offset(t)});
        ct *= z2;
        binom = binom * (d - s - t) / (t + 1);
      }
      break;
    }
    case WeightKind::POD: {
      std::vector<double> g2(static_cast<std::size_t>(d - s));
      for (int j = s; j < d; ++j) {
        const double g = w.product_gammas()[j];
        g2[j - s] = g * g;
      }
      const std::vector<double> e = elementary_symmetric(g2);
      double ct = 1.0;
      for (int t = 0; t <= d - s; ++t) {
        if (e[t] != 0.0) terms.push_back({ct * e[t], view.with_card_offset(t)});
        ct *= z2;
      }
      break;
    }
    case WeightKind::ExplicitGeneral: {
      const std::uint64_t high = ((std::uint64_t{1} << d) - 1) & ~((std::uint64_t{1} << s) - 1);
      for (std::uint64_t m = high;; m = (m - 1) & high) {
        terms.push_back({std::pow(z2, std::popcount(m)), view.with_extra_mask(m)});
        if (m == 0) break;
      }
      break;
    }
  }
  return terms;
}

}  // namespace

CbcResult cbc_construct(const CriterionContext& ctx) {
  const int n = ctx.n();
  const int d = ctx.d();
  const double z2 = ctx.two_zeta_2alpha();

  CbcResult out;
  std::vector<int> z;
  z.reserve(d);

  for (int s = 1; s <= d; ++s) {
    const std::vector<ThetaTerm> terms = theta_terms(ctx, s);
    const std::span<const int> head(z);

    // Each summand is affine in the kernel value of the new component:
    // Phi_beta(k; z, c) = g(k) + phi(kc) h(k), splitting subsets by whether
    // they contain s. The candidate scan then only needs the three
    // per-point quadratic coefficients.
    std::vector<double> qa(static_cast<std::size_t>(n), 0.0);
    std::vector<double> qb(static_cast<std::size_t>(n), 0.0);
    std::vector<double> qc(static_cast<std::size_t>(n), 0.0);
    double constant = 0.0;
    for (const ThetaTerm& term : terms) {
      const SubsetWeights prev = term.beta.restricted(s - 1);
      const SubsetWeights prev_up = prev.with_extra(s);
      constant -= term.coeff * (term.beta.square_sum(z2) + S_prefix(ctx, head, prev) +
                                z2 * S_prefix(ctx, head, prev_up));
      parallel_for(1, n + 1, [&](std::int64_t k) {
        thread_local std::vector<double> phi;
        phi.resize(head.size());
        for (std::size_t j = 0; j < head.size(); ++j) phi[j] = ctx.kernel(k * head[j] % n);
        const double g = prev.kernel_sum(phi);
        const double h = prev_up.kernel_sum(phi);
        qa[k - 1] += term.coeff * g * g;
        qb[k - 1] += 2.0 * term.coeff * g * h;
        qc[k - 1] += term.coeff * h * h;
      });
    }

    std::vector<double> cand(static_cast<std::size_t>(n - 1));
    parallel_for(1, n, [&](std::int64_t c) {
      double acc = 0.0;
      for (std::int64_t k = 1; k <= n; ++k) {
        const double phi = ctx.kernel(k * c % n);
        acc += qa[k - 1] + phi * (qb[k - 1] + phi * qc[k - 1]);
      }
      cand[c - 1] = acc / n + constant;
    });

    int best = 1;
    for (int c = 2; c < n; ++c)
      if (cand[c - 1] < cand[best - 1]) best = c;

    z.push_back(best);
    out.steps.push_back({s, best, cand[best - 1], std::move(cand)});
  }

  out.rule = make_generating_vector(n, std::move(z));
  return out;
}

SearchResult exhaustive_search(const CriterionContext& ctx, std::int64_t budget) {
  const int n = ctx.n();
  const int d = ctx.d();
  const double total = std::pow(static_cast<double>(n - 1), d);
  if (total > static_cast<double>(budget))
    throw BudgetError("exhaustive search: " + format_double(total) +
                      " vectors exceed the budget of " + std::to_string(budget));

  const SubsetWeights view = SubsetWeights::whole(ctx.weights(), d);
  std::vector<int> cur(static_cast<std::size_t>(d), 1);
  SearchResult best;
  bool first = true;
  while (true) {
    const double val = S_prefix(ctx, cur, view);
    if (first || val < best.value) {
      best.value = val;
      best.rule = GeneratingVector{n, cur};
      first = false;
    }
    int j = d - 1;
    while (j >= 0 && cur[j] == n - 1) {
      cur[j] = 1;
      --j;
    }
    if (j < 0) break;
    ++cur[j];
  }
  return best;
}

}  // namespace lattice
