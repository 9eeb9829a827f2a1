#pragma once

// Dynamically distributed democracy: vote power held by abstaining citizens
// flows along their trust links until it reaches active voters, who then
// vote with the power they absorbed.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "collective/error.hpp"
#include "collective/random.hpp"
#include "collective/trustnet.hpp"

namespace collective {

struct ActivityMask {
  std::vector<std::uint8_t> active;  // 1 = votes, 0 = abstains
  double k = 100.0;                  // participation percentage
  std::size_t resamples = 0;         // all-abstain draws that were redrawn

  std::size_t size() const { return active.size(); }
  std::size_t active_count() const {
    return static_cast<std::size_t>(std::count(active.begin(), active.end(), std::uint8_t{1}));
  }
};

/// Each citizen votes with probability k/100. Attempt r draws from
/// Engine(derive_seed(seed, {r})); an all-abstain draw moves on to r + 1.
inline ActivityMask sample_activity(std::size_t n, double k, std::uint64_t seed) {
  detail::require(n >= 1, "population must be non-empty");
  detail::require(k > 0.0 && k <= 100.0, "participation percentage k must lie in (0, 100]");
  ActivityMask mask;
  mask.k = k;
  mask.active.assign(n, 0);
  const double prob = k / 100.0;
  for (std::uint64_t attempt = 0;; ++attempt) {
    Engine eng(derive_seed(seed, {attempt}));
    bool any = false;
    for (auto& a : mask.active) {
      a = bernoulli(eng, prob) ? 1 : 0;
      any = any || a;
    }
    if (any) return mask;
    ++mask.resamples;
  }
}

struct PropagationOptions {
  double epsilon = 1.0 - 1e-9;  // stop once this much power is absorbed
  std::size_t max_iter = 0;     // 0 selects 10 * n
};

struct PropagationState {
  std::vector<double> pi;  // power still in flight when the loop stopped
  std::vector<double> y;   // absorbed power, renormalized to sum 1
  std::size_t iterations = 0;
  double residual = 0.0;   // in-flight power discarded at cutoff
};

/// Called after every iteration with the raw (un-renormalized) vectors.
struct NoObserver {
  void operator()(std::size_t, std::span<const double>, std::span<const double>) const {}
};

/// Iterates
///   y  <- y + pi o a
///   pi <- pi o (1 - a)
///   pi_j <- sum_i pi_i A_ij
/// from pi = 1/n, y = 0 while sum(y) < epsilon and fewer than max_iter
/// iterations have run. The push moves each citizen's power along its
/// row-stochastic out-distribution, so total power is conserved.
template <class Observer = NoObserver>
PropagationState propagate_vote_power(const TrustNetwork& net, const ActivityMask& mask,
                                      const PropagationOptions& options = {},
                                      Observer&& observe = Observer{}) {
  const std::size_t n = net.size();
  detail::require(mask.size() == n, "activity mask and network sizes differ");
  detail::require(options.epsilon > 0.0 && options.epsilon < 1.0, "epsilon must lie in (0, 1)");
  detail::require(mask.active_count() >= 1, "activity mask has no active citizen");
  const std::size_t max_iter = options.max_iter == 0 ? 10 * n : options.max_iter;

  PropagationState state;
  state.pi.assign(n, 1.0 / static_cast<double>(n));
  state.y.assign(n, 0.0);
  std::vector<double> next(n);
  double absorbed = 0.0;

  while (absorbed < options.epsilon && state.iterations < max_iter) {
    for (std::size_t i = 0; i < n; ++i) {
      if (mask.active[i]) {
        state.y[i] += state.pi[i];
        state.pi[i] = 0.0;
      }
    }
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double power = state.pi[i];
      if (power == 0.0) continue;
      for (const auto& e : net.out_edges(i)) next[e.target] += power * e.weight;
    }
    state.pi.swap(next);
    ++state.iterations;
    absorbed = std::accumulate(state.y.begin(), state.y.end(), 0.0);
    observe(state.iterations, std::span<const double>(state.pi), std::span<const double>(state.y));
  }

  state.residual = std::accumulate(state.pi.begin(), state.pi.end(), 0.0);
  if (state.residual > 0.0)
    for (auto& v : state.y) v /= absorbed;
  return state;
}

/// Absorbed power computed directly from the absorbing-chain equations.
///
/// With T the abstainers and S the voters, Q = A[T, T] and R = A[T, S], the
/// expected total power passing through the abstainers solves
///   (I - Q^T) z = (1/n) 1
/// and voter s ends with 1/n + sum_t z_t R_ts. Throws StructuralError when
/// some abstainer has no directed path to any voter.
inline std::vector<double> exact_absorption_oracle(const TrustNetwork& net, const ActivityMask& mask) {
  const std::size_t n = net.size();
  detail::require(mask.size() == n, "activity mask and network sizes differ");
  detail::require(mask.active_count() >= 1, "activity mask has no active citizen");

  // Reverse reachability from the voters.
  std::vector<std::vector<std::size_t>> incoming(n);
  for (const auto& e : net.edges())
    if (e.weight > 0.0) incoming[e.target].push_back(e.source);
  std::vector<bool> reaches(n, false);
  std::deque<std::size_t> frontier;
  for (std::size_t i = 0; i < n; ++i)
    if (mask.active[i]) {
      reaches[i] = true;
      frontier.push_back(i);
    }
  while (!frontier.empty()) {
    const std::size_t v = frontier.front();
    frontier.pop_front();
    for (std::size_t u : incoming[v])
      if (!reaches[u]) {
        reaches[u] = true;
        frontier.push_back(u);
      }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!reaches[i])
      throw StructuralError("citizen " + std::to_string(i) + " cannot reach any active citizen");

  std::vector<std::ptrdiff_t> slot(n, -1);
  std::vector<std::size_t> transient;
  for (std::size_t i = 0; i < n; ++i)
    if (!mask.active[i]) {
      slot[i] = static_cast<std::ptrdiff_t>(transient.size());
      transient.push_back(i);
    }

  const double share = 1.0 / static_cast<double>(n);
  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    if (mask.active[i]) y[i] = share;
  if (transient.empty()) return y;

  const auto t = static_cast<Eigen::Index>(transient.size());
  Eigen::MatrixXd system = Eigen::MatrixXd::Identity(t, t);
  for (std::size_t r = 0; r < transient.size(); ++r)
    for (const auto& e : net.out_edges(transient[r]))
      if (slot[e.target] >= 0) system(slot[e.target], static_cast<Eigen::Index>(r)) -= e.weight;
  const Eigen::VectorXd rhs = Eigen::VectorXd::Constant(t, share);
  const Eigen::VectorXd z = system.partialPivLu().solve(rhs);

  for (std::size_t r = 0; r < transient.size(); ++r)
    for (const auto& e : net.out_edges(transient[r]))
      if (mask.active[e.target]) y[e.target] += z(static_cast<Eigen::Index>(r)) * e.weight;
  return y;
}

struct DecisionOutcome {
  double tendency = 0.5;
  int vote = 0;
};

namespace detail {

inline void require_tendencies(std::span<const double> x) {
  for (double xi : x) require(xi >= 0.0 && xi <= 1.0, "tendencies must lie in [0, 1]");
}

// Accumulates x_i * (1/count) in index order, the same arithmetic that
// weighted_outcome performs on a uniform power vector, so the two agree
// bit for bit when every citizen votes.
template <class Selected>
double equal_weight_mean(std::span<const double> x, Selected&& selected, std::size_t count) {
  const double w = 1.0 / static_cast<double>(count);
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (selected(i)) sum += x[i] * w;
  return sum;
}

/// Headcount majority over the selected citizens: below 0.5 votes 0, above
/// votes 1, exactly 0.5 flips a fair coin; an even split flips another.
template <class Selected>
int headcount_vote(std::span<const double> x, Selected&& selected, std::uint64_t vote_seed) {
  Engine eng(vote_seed);
  long ones = 0, zeros = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!selected(i)) continue;
    const bool one = x[i] > 0.5 || (x[i] == 0.5 && bernoulli(eng, 0.5));
    (one ? ones : zeros) += 1;
  }
  if (ones != zeros) return ones > zeros ? 1 : 0;
  return bernoulli(eng, 0.5) ? 1 : 0;
}

}  // namespace detail

/// Tendency x . y and the power-weighted majority vote. Mass held by a
/// citizen at exactly 0.5 goes to the side picked by that citizen's coin;
/// an exact weight tie is settled by one more coin.
inline DecisionOutcome weighted_outcome(std::span<const double> x, std::span<const double> y,
                                        std::uint64_t vote_seed = 0) {
  detail::require(x.size() == y.size(), "tendency and power vectors differ in length");
  detail::require_tendencies(x);
  double total = 0.0;
  for (double v : y) {
    detail::require(v >= 0.0, "vote power must be non-negative");
    total += v;
  }
  detail::require(std::abs(total - 1.0) <= 1e-9, "vote power must sum to 1");

  Engine eng(vote_seed);
  DecisionOutcome out;
  out.tendency = 0.0;
  double for_one = 0.0, for_zero = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    out.tendency += x[i] * y[i];
    if (y[i] == 0.0) continue;
    if (x[i] > 0.5 || (x[i] == 0.5 && bernoulli(eng, 0.5)))
      for_one += y[i];
    else
      for_zero += y[i];
  }
  if (for_one != for_zero)
    out.vote = for_one > for_zero ? 1 : 0;
  else
    out.vote = bernoulli(eng, 0.5) ? 1 : 0;
  return out;
}

/// Everyone votes, unweighted.
inline DecisionOutcome full_population_reference(std::span<const double> x, std::uint64_t vote_seed = 0) {
  detail::require(!x.empty(), "population must be non-empty");
  detail::require_tendencies(x);
  DecisionOutcome out;
  out.tendency = detail::equal_weight_mean(x, [](std::size_t) { return true; }, x.size());
  out.vote = detail::headcount_vote(x, [](std::size_t) { return true; }, vote_seed);
  return out;
}

/// Only the active citizens vote, unweighted.
inline DecisionOutcome direct_baseline(std::span<const double> x, const ActivityMask& mask,
                                       std::uint64_t vote_seed = 0) {
  detail::require(mask.size() == x.size(), "activity mask and population sizes differ");
  detail::require(mask.active_count() >= 1, "activity mask has no active citizen");
  detail::require_tendencies(x);
  const auto selected = [&](std::size_t i) { return mask.active[i] != 0; };
  DecisionOutcome out;
  out.tendency = detail::equal_weight_mean(x, selected, mask.active_count());
  out.vote = detail::headcount_vote(x, selected, vote_seed);
  return out;
}

inline double tendency_error(double reference, double observed) { return std::abs(reference - observed); }

}  // namespace collective
