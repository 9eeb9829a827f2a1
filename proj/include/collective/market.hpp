#pragma once

// Decision-market simulation over a d-dimensional knowledge space [0,1]^d.
// The market starts at the origin and each citizen, in turn, overwrites one
// coordinate with their own knowledge in that dimension. The environment
// (ground truth) is the all-ones corner.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "collective/error.hpp"
#include "collective/random.hpp"

namespace collective {

/// n x d knowledge points, row-major, every entry in [0, 1].
///
/// Generated matrices also keep the unclamped normal draws. Those rank a
/// citizen's dimensions, so several entries clamped to 1 still have a strict
/// order. Explicit matrices rank by their values.
class KnowledgeMatrix {
 public:
  KnowledgeMatrix() = default;

  KnowledgeMatrix(std::size_t citizens, std::size_t dims, std::vector<double> values, double p = 0.5,
                  std::uint64_t seed = 0)
      : n_(citizens), d_(dims), p_(p), seed_(seed), values_(std::move(values)) {
    detail::require(n_ >= 1 && d_ >= 1, "knowledge matrix needs at least one citizen and one dimension");
    detail::require(values_.size() == n_ * d_, "knowledge matrix size does not match n * d");
    for (double v : values_) detail::require(v >= 0.0 && v <= 1.0, "knowledge values must lie in [0, 1]");
  }

  /// From raw draws; values are the draws clamped to [0, 1].
  static KnowledgeMatrix from_draws(std::size_t citizens, std::size_t dims, std::vector<double> draws, double p,
                                    std::uint64_t seed) {
    for (double v : draws) detail::require(std::isfinite(v), "knowledge draws must be finite");
    std::vector<double> values(draws.size());
    std::transform(draws.begin(), draws.end(), values.begin(), [](double v) { return std::clamp(v, 0.0, 1.0); });
    KnowledgeMatrix k(citizens, dims, std::move(values), p, seed);
    k.draws_ = std::move(draws);
    return k;
  }

  std::size_t citizens() const { return n_; }
  std::size_t dims() const { return d_; }
  double p() const { return p_; }
  std::uint64_t seed() const { return seed_; }

  double operator()(std::size_t citizen, std::size_t dim) const { return values_[citizen * d_ + dim]; }
  std::span<const double> row(std::size_t citizen) const {
    return std::span<const double>(values_).subspan(citizen * d_, d_);
  }
  std::span<const double> values() const { return values_; }

  /// Row used to rank dimensions: the raw draws when present.
  std::span<const double> ranking_row(std::size_t citizen) const {
    return std::span<const double>(draws_.empty() ? values_ : draws_).subspan(citizen * d_, d_);
  }

 private:
  std::size_t n_ = 0;
  std::size_t d_ = 0;
  double p_ = 0.5;
  std::uint64_t seed_ = 0;
  std::vector<double> values_;
  std::vector<double> draws_;
};

/// Entries ~ Normal(mean p, sd p(1-p)), clamped to [0, 1], drawn row by row.
inline KnowledgeMatrix generate_knowledge(std::size_t n, std::size_t d, double p, std::uint64_t seed) {
  detail::require(n >= 1 && d >= 1, "n and d must be at least 1");
  detail::require(p >= 0.0 && p <= 1.0, "population quality p must lie in [0, 1]");
  Engine eng(seed);
  const double sd = p * (1.0 - p);
  std::vector<double> draws(n * d);
  for (auto& v : draws) v = p + sd * standard_normal(eng);
  return KnowledgeMatrix::from_draws(n, d, std::move(draws), p, seed);
}

inline std::vector<double> environment(std::size_t d) { return std::vector<double>(d, 1.0); }

struct MarketAction {
  std::size_t citizen = 0;
  std::size_t dimension = 0;
  double value = 0.0;
  bool participated = false;
};

struct MarketState {
  std::vector<double> m;
  std::vector<MarketAction> log;
};

/// Explicit choices for a free-market run: order[t] acts at step t and
/// writes into dimensions[t].
struct FreeMarketScript {
  std::vector<std::size_t> order;
  std::vector<std::size_t> dimensions;
};

/// Explicit choices for an incentive-market run: order[t] acts at step t
/// and takes part iff participates[t].
struct IncentiveMarketScript {
  std::vector<std::size_t> order;
  std::vector<bool> participates;
};

namespace detail {

inline void require_order(std::span<const std::size_t> order, std::size_t n) {
  require(order.size() <= n, "script lists more actions than citizens");
  std::vector<bool> seen(n, false);
  for (auto c : order) {
    require(c < n, "script names a citizen out of range");
    require(!seen[c], "script names a citizen twice");
    seen[c] = true;
  }
}

inline std::vector<std::size_t> random_order(std::size_t n, Engine& eng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  shuffle(eng, std::span(order));
  return order;
}

}  // namespace detail

/// Index of the citizen's strongest dimension; ties go to the lowest index.
inline std::size_t best_dimension(std::span<const double> knowledge) {
  return static_cast<std::size_t>(std::max_element(knowledge.begin(), knowledge.end()) - knowledge.begin());
}

inline MarketState run_incentive_free_market(const KnowledgeMatrix& know, const FreeMarketScript& script) {
  detail::require_order(script.order, know.citizens());
  detail::require(script.dimensions.size() == script.order.size(), "one dimension per scripted action");
  MarketState state;
  state.m.assign(know.dims(), 0.0);
  state.log.reserve(script.order.size());
  for (std::size_t t = 0; t < script.order.size(); ++t) {
    const std::size_t c = script.order[t];
    const std::size_t j = script.dimensions[t];
    detail::require(j < know.dims(), "scripted dimension out of range");
    state.m[j] = know(c, j);
    state.log.push_back({c, j, know(c, j), true});
  }
  return state;
}

/// Seeded run: one pass in a random order; each citizen writes their
/// knowledge into a uniformly random dimension. The permutation and the
/// dimension picks come from one stream seeded with order_seed.
inline MarketState run_incentive_free_market(const KnowledgeMatrix& know, std::uint64_t order_seed) {
  Engine eng(order_seed);
  FreeMarketScript script;
  script.order = detail::random_order(know.citizens(), eng);
  script.dimensions.resize(script.order.size());
  for (auto& j : script.dimensions) j = uniform_index(eng, know.dims());
  return run_incentive_free_market(know, script);
}

inline MarketState run_incentive_market(const KnowledgeMatrix& know, const IncentiveMarketScript& script) {
  detail::require_order(script.order, know.citizens());
  detail::require(script.participates.size() == script.order.size(), "one participation flag per scripted action");
  MarketState state;
  state.m.assign(know.dims(), 0.0);
  state.log.reserve(script.order.size());
  for (std::size_t t = 0; t < script.order.size(); ++t) {
    const std::size_t c = script.order[t];
    const std::size_t j = best_dimension(know.ranking_row(c));
    const bool joins = script.participates[t];
    if (joins) state.m[j] = know(c, j);
    state.log.push_back({c, j, know(c, j), joins});
  }
  return state;
}

/// Seeded run: one pass in a random order (from order_seed); each citizen
/// targets their strongest dimension (by ranking_row) and takes part with
/// probability equal to their clamped knowledge there (coins from coin_seed,
/// one per citizen in acting order).
inline MarketState run_incentive_market(const KnowledgeMatrix& know, std::uint64_t order_seed,
                                        std::uint64_t coin_seed) {
  Engine order_eng(order_seed);
  Engine coin_eng(coin_seed);
  IncentiveMarketScript script;
  script.order = detail::random_order(know.citizens(), order_eng);
  script.participates.resize(script.order.size());
  for (std::size_t t = 0; t < script.order.size(); ++t) {
    const std::size_t c = script.order[t];
    script.participates[t] = bernoulli(coin_eng, know(c, best_dimension(know.ranking_row(c))));
  }
  return run_incentive_market(know, script);
}

/// RootNormalized: sqrt(sum (e - m)^2) / sqrt(d).
/// MeanSquared:    sum (e - m)^2 / d, the square of the former.
enum class DistanceVariant { RootNormalized, MeanSquared };

inline std::string_view to_string(DistanceVariant v) {
  return v == DistanceVariant::RootNormalized ? "root-normalized" : "mean-squared";
}

inline DistanceVariant parse_distance_variant(std::string_view text) {
  if (text == "root-normalized" || text == "RootNormalized") return DistanceVariant::RootNormalized;
  if (text == "mean-squared" || text == "MeanSquared") return DistanceVariant::MeanSquared;
  throw ParameterError("unknown distance variant '" + std::string(text) +
                       "' (expected root-normalized or mean-squared)");
}

inline double market_distance_error(std::span<const double> m, std::span<const double> e,
                                    DistanceVariant variant) {
  detail::require(!m.empty(), "market must have at least one dimension");
  detail::require(m.size() == e.size(), "market and environment differ in dimension");
  double sq = 0.0;
  for (std::size_t j = 0; j < m.size(); ++j) sq += (e[j] - m[j]) * (e[j] - m[j]);
  const double mean_sq = sq / static_cast<double>(m.size());
  return variant == DistanceVariant::MeanSquared ? mean_sq : std::sqrt(mean_sq);
}

struct MarketDecision {
  std::vector<int> decision;
  bool correct = false;  // decision equals the all-ones environment
};

/// Rounds half up: values >= 0.5 decide 1.
inline MarketDecision market_decision(std::span<const double> m) {
  MarketDecision out;
  out.decision.reserve(m.size());
  out.correct = true;
  for (double v : m) {
    const int bit = v >= 0.5 ? 1 : 0;
    out.decision.push_back(bit);
    out.correct = out.correct && bit == 1;
  }
  return out;
}

/// Three citizens in three dimensions, acting in order 1, 2, 3. In the free
/// market they write dimensions 3, 1, 2; in the incentive market everyone
/// takes part.
struct WorkedExample {
  KnowledgeMatrix knowledge;
  FreeMarketScript free_script;
  IncentiveMarketScript incentive_script;
};

inline WorkedExample worked_example() {
  return WorkedExample{
      KnowledgeMatrix(3, 3, {0.7, 0.5, 0.4, 0.5, 0.6, 0.3, 0.3, 0.5, 0.7}, 0.5),
      FreeMarketScript{{0, 1, 2}, {2, 0, 1}},
      IncentiveMarketScript{{0, 1, 2}, {true, true, true}},
  };
}

}  // namespace collective
