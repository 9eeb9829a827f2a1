#pragma once

// Citizen tendency populations and directed trust networks.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <span>
#include <vector>

#include "collective/error.hpp"
#include "collective/random.hpp"

namespace collective {

/// Per-citizen political tendency in [0, 1]; 0.5 is moderate.
struct TendencyPopulation {
  std::vector<double> x;
  std::uint64_t seed = 0;

  std::size_t size() const { return x.size(); }
};

inline TendencyPopulation generate_tendencies(std::size_t n, std::uint64_t seed) {
  detail::require(n >= 2, "a population needs at least 2 citizens");
  Engine eng(seed);
  TendencyPopulation pop;
  pop.seed = seed;
  pop.x.resize(n);
  for (auto& xi : pop.x) xi = uniform01(eng);
  return pop;
}

/// Trust between two citizens: 1 for identical tendencies, 0 for opposite.
inline double edge_weight(double xi, double xj) {
  detail::require(xi >= 0.0 && xi <= 1.0 && xj >= 0.0 && xj <= 1.0, "tendencies must lie in [0, 1]");
  return 1.0 - std::abs(xi - xj);
}

struct NetworkGenParams {
  std::size_t m = 3;    // links created per arriving citizen
  double beta = 32.0;   // assortativity exponent on the similarity kernel
  std::uint64_t seed = 0;
  bool reciprocal = true;  // every trust link carries flow both ways
};

struct Edge {
  std::size_t source = 0;
  std::size_t target = 0;
  double raw_weight = 0.0;  // 1 - |x_source - x_target|
  double weight = 0.0;      // row-normalized
};

/// Directed weighted graph; out-edges of citizen i are contiguous and the
/// normalized weights of each row sum to one.
class TrustNetwork {
 public:
  TrustNetwork() = default;

  TrustNetwork(std::size_t n, std::vector<Edge> edges, NetworkGenParams params)
      : n_(n), params_(params), edges_(std::move(edges)), offsets_(n + 1, 0) {
    for (const auto& e : edges_) {
      detail::require(e.source < n_ && e.target < n_, "edge endpoint out of range");
      detail::require(e.source != e.target, "self-loops are not allowed");
      ++offsets_[e.source + 1];
    }
    std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
    std::vector<Edge> sorted(edges_.size());
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (const auto& e : edges_) sorted[cursor[e.source]++] = e;
    edges_ = std::move(sorted);
    normalize();
  }

  std::size_t size() const { return n_; }
  const NetworkGenParams& params() const { return params_; }
  std::span<const Edge> edges() const { return edges_; }

  std::span<const Edge> out_edges(std::size_t i) const {
    return std::span<const Edge>(edges_).subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
  }

  std::size_t out_degree(std::size_t i) const { return offsets_[i + 1] - offsets_[i]; }

  std::vector<std::size_t> in_degrees() const {
    std::vector<std::size_t> deg(n_, 0);
    for (const auto& e : edges_) ++deg[e.target];
    return deg;
  }

  /// Dense row-stochastic matrix, row-major n x n.
  std::vector<double> dense() const {
    std::vector<double> a(n_ * n_, 0.0);
    for (const auto& e : edges_) a[e.source * n_ + e.target] += e.weight;
    return a;
  }

 private:
  // A row whose raw weights are all zero (only possible when every target
  // sits at the opposite extreme) falls back to uniform over its out-edges.
  void normalize() {
    for (std::size_t i = 0; i < n_; ++i) {
      const std::size_t lo = offsets_[i], hi = offsets_[i + 1];
      double sum = 0.0;
      for (std::size_t k = lo; k < hi; ++k) sum += edges_[k].raw_weight;
      for (std::size_t k = lo; k < hi; ++k)
        edges_[k].weight = sum > 0.0 ? edges_[k].raw_weight / sum : 1.0 / static_cast<double>(hi - lo);
    }
  }

  std::size_t n_ = 0;
  NetworkGenParams params_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
};

/// Directed growth with preferential attachment and a similarity bias.
///
/// Citizens join in a seeded random order. The first m + 1 arrivals are wired
/// to each other in both directions. Every later arrival creates m outgoing
/// links to distinct earlier arrivals, target j drawn with probability
/// proportional to (in_degree(j) + 1) * (1 - |x_i - x_j|)^beta, one target at
/// a time without replacement. in_degree counts links created towards j.
///
/// With `reciprocal`, each created link also gets its reverse edge (same raw
/// weight), so the graph is connected in both directions. Without it, links
/// only point at earlier arrivals and all flow drains into the first m + 1.
inline TrustNetwork generate_network(const TendencyPopulation& pop, const NetworkGenParams& params) {
  const std::size_t n = pop.size();
  detail::require(params.m >= 1, "m must be at least 1");
  detail::require(params.m < n, "m must be smaller than the population size");
  detail::require(params.beta >= 0.0 && std::isfinite(params.beta), "beta must be finite and non-negative");
  for (double xi : pop.x) detail::require(xi >= 0.0 && xi <= 1.0, "tendencies must lie in [0, 1]");

  Engine eng(params.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  shuffle(eng, std::span(order));

  const auto& x = pop.x;
  std::vector<Edge> edges;
  edges.reserve(2 * n * params.m);
  std::vector<std::size_t> in_degree(n, 0);
  auto link = [&](std::size_t from, std::size_t to) {
    edges.push_back({from, to, edge_weight(x[from], x[to]), 0.0});
    ++in_degree[to];
  };

  const std::size_t core = params.m + 1;
  for (std::size_t a = 0; a < core; ++a)
    for (std::size_t b = 0; b < core; ++b)
      if (a != b) link(order[a], order[b]);

  std::vector<double> score;
  for (std::size_t t = core; t < n; ++t) {
    const std::size_t citizen = order[t];
    score.assign(t, 0.0);
    for (std::size_t s = 0; s < t; ++s) {
      const std::size_t cand = order[s];
      const double sim = edge_weight(x[citizen], x[cand]);
      score[s] = static_cast<double>(in_degree[cand] + 1) * std::pow(sim, params.beta);
    }
    std::vector<std::size_t> chosen;
    chosen.reserve(params.m);
    for (std::size_t r = 0; r < params.m; ++r) {
      double total = 0.0;
      for (double w : score) total += w;
      std::size_t pick = 0;
      if (total > 0.0) {
        double u = uniform01(eng) * total;
        pick = t;  // sentinel
        std::size_t last_positive = 0;
        for (std::size_t s = 0; s < t; ++s) {
          if (score[s] <= 0.0) continue;
          last_positive = s;
          if (u < score[s]) {
            pick = s;
            break;
          }
          u -= score[s];
        }
        if (pick == t) pick = last_positive;  // rounding at the upper end
      } else {
        // Every remaining candidate has zero similarity weight: pick
        // uniformly among those not chosen yet.
        std::vector<std::size_t> remaining;
        for (std::size_t s = 0; s < t; ++s)
          if (std::find(chosen.begin(), chosen.end(), s) == chosen.end()) remaining.push_back(s);
        pick = remaining[uniform_index(eng, remaining.size())];
      }
      chosen.push_back(pick);
      score[pick] = 0.0;
    }
    for (std::size_t s : chosen) link(citizen, order[s]);
  }
  if (params.reciprocal) {
    const std::size_t created = edges.size();
    const std::size_t core_links = core * (core - 1);  // already mutual
    for (std::size_t e = core_links; e < created; ++e) {
      const Edge fwd = edges[e];
      edges.push_back({fwd.target, fwd.source, fwd.raw_weight, 0.0});
    }
  }
  return TrustNetwork(n, std::move(edges), params);
}

/// CSV edge list `source,target,raw_weight,normalized_weight`.
inline void write_edge_list(std::ostream& out, const TrustNetwork& net) {
  out << "source,target,raw_weight,normalized_weight\n";
  char buf[96];
  for (const auto& e : net.edges()) {
    std::snprintf(buf, sizeof buf, "%zu,%zu,%.12g,%.12g\n", e.source, e.target, e.raw_weight, e.weight);
    out << buf;
  }
}

}  // namespace collective
