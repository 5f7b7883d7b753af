#include "lattice/weights.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "lattice/korobov.hpp"
#include "lattice/util.hpp"

namespace lattice {

namespace {

constexpr int kMaxDim = 63;
constexpr int kDenseDimLimit = 20;

void check_dim(int d) {
  if (d < 1 || d > kMaxDim) throw std::invalid_argument("weight model dimension out of range");
}

void check_nonnegative(const std::vector<double>& v, const char* what) {
  for (double x : v) {
    if (!(x >= 0.0)) throw std::invalid_argument(std::string(what) + " must be nonnegative");
  }
}

// C(s, t) for t = 0..s as doubles.
std::vector<double> binomial_row(int s) {
  std::vector<double> row(s + 1);
  row[0] = 1.0;
  for (int t = 1; t <= s; ++t) row[t] = row[t - 1] * (s - t + 1) / t;
  return row;
}

double card_mult(CardFactor f, int t) {
  switch (f) {
    case CardFactor::One: return 1.0;
    case CardFactor::Card: return t;
    case CardFactor::CardOrOne: return t > 0 ? t : 1;
  }
  return 1.0;
}

}  // namespace

std::vector<double> elementary_symmetric(std::span<const double> x) {
  std::vector<double> e(x.size() + 1, 0.0);
  e[0] = 1.0;
  int used = 0;
  for (double v : x) {
    ++used;
    for (int t = used; t >= 1; --t) e[t] += v * e[t - 1];
  }
  return e;
}

WeightModel WeightModel::product(std::vector<double> gammas) {
  check_dim(static_cast<int>(gammas.size()));
  check_nonnegative(gammas, "product weights");
  WeightModel m;
  m.kind_ = WeightKind::Product;
  m.d_ = static_cast<int>(gammas.size());
  m.gammas_ = std::move(gammas);
  return m;
}

WeightModel WeightModel::order_dependent(int d, std::vector<double> order_factors) {
  check_dim(d);
  if (static_cast<int>(order_factors.size()) != d + 1)
    throw std::invalid_argument("order factors must have d + 1 entries");
  if (order_factors[0] != 1.0)
    throw std::invalid_argument("order factor for the empty set must be 1");
  check_nonnegative(order_factors, "order factors");
  WeightModel m;
  m.kind_ = WeightKind::OrderDependent;
  m.d_ = d;
  m.order_factors_ = std::move(order_factors);
  return m;
}

WeightModel WeightModel::pod(std::vector<double> gammas, std::vector<double> order_factors) {
  WeightModel m = product(std::move(gammas));
  if (static_cast<int>(order_factors.size()) != m.d_ + 1)
    throw std::invalid_argument("order factors must have d + 1 entries");
  if (order_factors[0] != 1.0)
    throw std::invalid_argument("order factor for the empty set must be 1");
  check_nonnegative(order_factors, "order factors");
  m.kind_ = WeightKind::POD;
  m.order_factors_ = std::move(order_factors);
  return m;
}

WeightModel WeightModel::explicit_general(int d, std::map<std::uint64_t, double> table) {
  check_dim(d);
  const std::uint64_t full = (d == 0) ? 0 : ((std::uint64_t{1} << d) - 1);
  WeightModel m;
  m.kind_ = WeightKind::ExplicitGeneral;
  m.d_ = d;
  for (auto& [u, g] : table) {
    if ((u & ~full) != 0) throw std::invalid_argument("weight table key outside {1..d}");
    if (!(g >= 0.0)) throw std::invalid_argument("weights must be nonnegative");
    if (u == 0 && g != 1.0) throw std::invalid_argument("weight of the empty set must be 1");
    if (u != 0 && g > 0.0) m.table_.emplace(u, g);  // canonical: drop zeros and the empty set
  }
  if (d <= kDenseDimLimit) {
    m.dense_.assign(std::uint64_t{1} << d, 0.0);
    m.dense_[0] = 1.0;
    for (auto& [u, g] : m.table_) m.dense_[u] = g;
  }
  return m;
}

void WeightModel::check_mask(std::uint64_t u) const {
  const std::uint64_t full = (std::uint64_t{1} << d_) - 1;
  if ((u & ~full) != 0) throw std::domain_error("subset contains a coordinate beyond d");
}

double WeightModel::table_gamma(std::uint64_t u) const {
  if (!dense_.empty()) return dense_[u];
  if (u == 0) return 1.0;
  auto it = table_.find(u);
  return it == table_.end() ? 0.0 : it->second;
}

double WeightModel::gamma(std::uint64_t u) const {
  check_mask(u);
  switch (kind_) {
    case WeightKind::ExplicitGeneral:
      return table_gamma(u);
    case WeightKind::Product: {
      double g = 1.0;
      for (std::uint64_t b = u; b != 0; b &= b - 1) g *= gammas_[std::countr_zero(b)];
      return g;
    }
    case WeightKind::OrderDependent:
      return order_factors_[std::popcount(u)];
    case WeightKind::POD: {
      double g = order_factors_[std::popcount(u)];
      for (std::uint64_t b = u; b != 0; b &= b - 1) g *= gammas_[std::countr_zero(b)];
      return g;
    }
  }
  return 0.0;
}

double WeightModel::gamma(std::span<const int> u) const {
  std::uint64_t mask = 0;
  for (int j : u) {
    if (j < 1 || j > d_) throw std::domain_error("subset contains a coordinate beyond d");
    mask |= std::uint64_t{1} << (j - 1);
  }
  return gamma(mask);
}

double WeightModel::max_weight() const {
  switch (kind_) {
    case WeightKind::ExplicitGeneral: {
      double best = 1.0;  // empty set
      for (auto& [u, g] : table_) best = std::max(best, g);
      return best;
    }
    case WeightKind::Product: {
      double best = 1.0;
      for (double g : gammas_) best *= std::max(1.0, g);
      return best;
    }
    case WeightKind::OrderDependent:
      return *std::max_element(order_factors_.begin(), order_factors_.end());
    case WeightKind::POD: {
      // Best subset of each cardinality takes the t largest factors.
      std::vector<double> sorted = gammas_;
      std::sort(sorted.begin(), sorted.end(), std::greater<>());
      double best = order_factors_[0], prefix = 1.0;
      for (int t = 1; t <= d_; ++t) {
        prefix *= sorted[t - 1];
        best = std::max(best, order_factors_[t] * prefix);
      }
      return best;
    }
  }
  return 1.0;
}

SubsetWeights SubsetWeights::whole(const WeightModel& m, int s) {
  if (s < 0 || s > m.dimension()) throw std::invalid_argument("active dimension out of range");
  SubsetWeights w;
  w.model_ = &m;
  w.s_ = s;
  return w;
}

SubsetWeights SubsetWeights::with_extra(int j) const {
  if (j <= s_ || j > model_->dimension())
    throw std::invalid_argument("extra coordinate must lie beyond the active dimension");
  SubsetWeights w = *this;
  switch (model_->kind()) {
    case WeightKind::ExplicitGeneral:
      w.extra_ |= std::uint64_t{1} << (j - 1);
      break;
    case WeightKind::Product:
      w.scale_ *= model_->product_gammas()[j - 1];
      break;
    case WeightKind::OrderDependent:
      w.card_off_ += 1;
      break;
    case WeightKind::POD:
      w.scale_ *= model_->product_gammas()[j - 1];
      w.card_off_ += 1;
      break;
  }
  return w;
}

SubsetWeights SubsetWeights::with_extra_mask(std::uint64_t w) const {
  SubsetWeights v = *this;
  for (std::uint64_t b = w; b != 0; b &= b - 1) v = v.with_extra(std::countr_zero(b) + 1);
  return v;
}

SubsetWeights SubsetWeights::with_card_offset(int t) const {
  if (model_->kind() != WeightKind::OrderDependent && model_->kind() != WeightKind::POD)
    throw std::invalid_argument("cardinality offset applies to order-dependent kinds only");
  if (t < 0 || s_ + card_off_ + t > model_->dimension())
    throw std::invalid_argument("cardinality offset out of range");
  SubsetWeights w = *this;
  w.card_off_ += t;
  return w;
}

SubsetWeights SubsetWeights::restricted(int s) const {
  if (s < 0 || s > s_) throw std::invalid_argument("restriction must shrink the active dimension");
  SubsetWeights w = *this;
  w.s_ = s;
  return w;
}

double SubsetWeights::operator()(std::uint64_t u) const {
  const std::uint64_t active = (std::uint64_t{1} << s_) - 1;
  if ((u & ~active) != 0) throw std::domain_error("subset outside the active dimension");
  switch (model_->kind()) {
    case WeightKind::ExplicitGeneral:
      return model_->gamma(u | extra_);
    case WeightKind::Product: {
      double g = scale_;
      for (std::uint64_t b = u; b != 0; b &= b - 1) g *= model_->product_gammas()[std::countr_zero(b)];
      return g;
    }
    case WeightKind::OrderDependent:
      return model_->order_factors()[std::popcount(u) + card_off_];
    case WeightKind::POD: {
      double g = scale_ * model_->order_factors()[std::popcount(u) + card_off_];
      for (std::uint64_t b = u; b != 0; b &= b - 1) g *= model_->product_gammas()[std::countr_zero(b)];
      return g;
    }
  }
  return 0.0;
}

double SubsetWeights::kernel_sum(std::span<const double> phi) const {
  if (static_cast<int>(phi.size()) != s_)
    throw std::invalid_argument("kernel value count must match the active dimension");
  switch (model_->kind()) {
    case WeightKind::ExplicitGeneral: {
      thread_local std::vector<double> prods;
      const std::uint64_t count = std::uint64_t{1} << s_;
      prods.resize(count);
      prods[0] = 1.0;
      double acc = model_->gamma(extra_);
      for (std::uint64_t u = 1; u < count; ++u) {
        const std::uint64_t low = u & (~u + 1);
        prods[u] = prods[u ^ low] * phi[std::countr_zero(low)];
        const double g = model_->gamma(u | extra_);
        if (g != 0.0) acc += g * prods[u];
      }
      return acc;
    }
    case WeightKind::Product: {
      double acc = scale_;
      for (int j = 0; j < s_; ++j) acc *= 1.0 + model_->product_gammas()[j] * phi[j];
      return acc;
    }
    case WeightKind::OrderDependent: {
      const std::vector<double> e = elementary_symmetric(phi);
      double acc = 0.0;
      for (int t = 0; t <= s_; ++t) acc += model_->order_factors()[t + card_off_] * e[t];
      return scale_ * acc;
    }
    case WeightKind::POD: {
      thread_local std::vector<double> scaled;
      scaled.resize(s_);
      for (int j = 0; j < s_; ++j) scaled[j] = model_->product_gammas()[j] * phi[j];
      const std::vector<double> e = elementary_symmetric(scaled);
      double acc = 0.0;
      for (int t = 0; t <= s_; ++t) acc += model_->order_factors()[t + card_off_] * e[t];
      return scale_ * acc;
    }
  }
  return 0.0;
}

double SubsetWeights::square_sum(double c) const {
  switch (model_->kind()) {
    case WeightKind::ExplicitGeneral: {
      double acc = 0.0;
      for (std::uint64_t u = 0; u < (std::uint64_t{1} << s_); ++u) {
        const double g = model_->gamma(u | extra_);
        if (g != 0.0) acc += g * g * std::pow(c, std::popcount(u));
      }
      return acc;
    }
    case WeightKind::Product: {
      double acc = scale_ * scale_;
      for (int j = 0; j < s_; ++j) {
        const double g = model_->product_gammas()[j];
        acc *= 1.0 + g * g * c;
      }
      return acc;
    }
    case WeightKind::OrderDependent: {
      const std::vector<double> bin = binomial_row(s_);
      double acc = 0.0, ct = 1.0;
      for (int t = 0; t <= s_; ++t) {
        const double g = model_->order_factors()[t + card_off_];
        acc += g * g * bin[t] * ct;
        ct *= c;
      }
      return scale_ * scale_ * acc;
    }
    case WeightKind::POD: {
      std::vector<double> sq(s_);
      for (int j = 0; j < s_; ++j) {
        const double g = model_->product_gammas()[j];
        sq[j] = g * g * c;
      }
      const std::vector<double> e = elementary_symmetric(sq);
      double acc = 0.0;
      for (int t = 0; t <= s_; ++t) {
        const double g = model_->order_factors()[t + card_off_];
        acc += g * g * e[t];
      }
      return scale_ * scale_ * acc;
    }
  }
  return 0.0;
}

double SubsetWeights::pow_sum(double lam, double c, CardFactor kappa) const {
  switch (model_->kind()) {
    case WeightKind::ExplicitGeneral: {
      double acc = 0.0;
      for (std::uint64_t u = 0; u < (std::uint64_t{1} << s_); ++u) {
        const double g = model_->gamma(u | extra_);
        if (g == 0.0) continue;
        const int t = std::popcount(u);
        acc += card_mult(kappa, t) * std::pow(g, lam) * std::pow(c, t);
      }
      return acc;
    }
    case WeightKind::Product: {
      const double sl = std::pow(scale_, lam);
      double prod = 1.0, ratio = 0.0;
      for (int j = 0; j < s_; ++j) {
        const double gj = std::pow(model_->product_gammas()[j], lam) * c;
        prod *= 1.0 + gj;
        ratio += gj / (1.0 + gj);
      }
      switch (kappa) {
        case CardFactor::One: return sl * prod;
        case CardFactor::Card: return sl * ratio * prod;
        case CardFactor::CardOrOne: return sl * (ratio * prod + 1.0);
      }
      return 0.0;
    }
    case WeightKind::OrderDependent: {
      const std::vector<double> bin = binomial_row(s_);
      double acc = 0.0, ct = 1.0;
      for (int t = 0; t <= s_; ++t) {
        const double g = model_->order_factors()[t + card_off_];
        if (g != 0.0) acc += card_mult(kappa, t) * std::pow(g, lam) * bin[t] * ct;
        ct *= c;
      }
      return std::pow(scale_, lam) * acc;
    }
    case WeightKind::POD: {
      std::vector<double> pw(s_);
      for (int j = 0; j < s_; ++j) pw[j] = std::pow(model_->product_gammas()[j], lam) * c;
      const std::vector<double> e = elementary_symmetric(pw);
      double acc = 0.0;
      for (int t = 0; t <= s_; ++t) {
        const double g = model_->order_factors()[t + card_off_];
        if (g != 0.0) acc += card_mult(kappa, t) * std::pow(g, lam) * e[t];
      }
      return std::pow(scale_, lam) * acc;
    }
  }
  return 0.0;
}

std::optional<double> check_decay_condition(const WeightModel& m, double alpha, double lam) {
  const int d = m.dimension();
  if (d > 25) throw BudgetError("decay condition check enumerates all subsets; dimension too large");
  const double c = 2.0 * riemann_zeta(alpha * lam);
  std::vector<double> g(std::uint64_t{1} << d);
  for (std::uint64_t u = 0; u < g.size(); ++u) g[u] = m.gamma(u);

  double xi = 1.0;
  for (int s = 1; s <= d; ++s) {
    const std::uint64_t low = (std::uint64_t{1} << s) - 1;
    const std::uint64_t high = ((std::uint64_t{1} << d) - 1) & ~low;
    for (std::uint64_t u = 0; u <= low; ++u) {
      const double gu = g[u];
      // Iterate w over subsets of {s+1:d}, the empty set last.
      for (std::uint64_t w = high;; w = (w - 1) & high) {
        if (w != 0) {
          const double guw = g[u | w];
          if (gu == 0.0) {
            if (guw > 0.0) return std::nullopt;
          } else if (guw > 0.0) {
            const double ratio =
                std::pow(guw, lam) * std::pow(c, std::popcount(w)) / std::pow(gu, lam);
            xi = std::max(xi, ratio);
          }
        }
        if (w == 0) break;
      }
    }
  }
  return xi;
}

}  // namespace lattice
