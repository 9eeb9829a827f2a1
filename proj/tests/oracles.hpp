#pragma once

// Independent reference computations used only by tests. None of these
// reuse the library code paths they check.

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

/// P[majority correct] by summing over all 2^n voter outcomes. An even
/// split contributes half its probability.
inline double enumerate_majority(int n, double p) {
  std::vector<double> weight(n + 1);
  for (int k = 0; k <= n; ++k) weight[k] = std::pow(p, k) * std::pow(1.0 - p, n - k);
  double total = 0.0;
  const std::uint64_t outcomes = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < outcomes; ++mask) {
    const int correct = std::popcount(mask);
    if (2 * correct > n) total += weight[correct];
    else if (2 * correct == n) total += 0.5 * weight[correct];
  }
  return total;
}

struct MonteCarloEstimate {
  double mean;
  double std_error;
};

/// Simulated majority votes of n independent voters (odd n).
inline MonteCarloEstimate simulate_majority(int n, double p, long trials, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::bernoulli_distribution voter(p);
  long wins = 0;
  for (long t = 0; t < trials; ++t) {
    int correct = 0;
    for (int v = 0; v < n; ++v) correct += voter(eng);
    if (2 * correct > n) ++wins;
  }
  const double mean = static_cast<double>(wins) / static_cast<double>(trials);
  return {mean, std::sqrt(mean * (1.0 - mean) / static_cast<double>(trials))};
}

/// Dense vote-power propagation straight from the matrix form, run for a
/// fixed number of sweeps (no tolerance logic): returns absorbed power.
inline std::vector<double> dense_absorption(const std::vector<double>& a, const std::vector<std::uint8_t>& active,
                                            int sweeps) {
  const std::size_t n = active.size();
  std::vector<double> pi(n, 1.0 / static_cast<double>(n)), y(n, 0.0), next(n);
  for (int s = 0; s < sweeps; ++s) {
    for (std::size_t i = 0; i < n; ++i)
      if (active[i]) {
        y[i] += pi[i];
        pi[i] = 0.0;
      }
    for (std::size_t j = 0; j < n; ++j) {
      next[j] = 0.0;
      for (std::size_t i = 0; i < n; ++i) next[j] += pi[i] * a[i * n + j];
    }
    pi.swap(next);
  }
  return y;
}

}  // namespace oracle
