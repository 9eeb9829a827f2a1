#pragma once

// Probability that a simple majority of n independent voters, each correct
// with probability p, picks the better of two options.

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "collective/error.hpp"

namespace collective {

/// How an even split is scored. FairCoin credits half of the tie mass;
/// OddOnly rejects even juries.
enum class TieRule { FairCoin, OddOnly };

inline std::string_view to_string(TieRule rule) {
  return rule == TieRule::FairCoin ? "fair-coin" : "odd-only";
}

inline TieRule parse_tie_rule(std::string_view text) {
  if (text == "fair-coin" || text == "faircoin" || text == "FairCoin") return TieRule::FairCoin;
  if (text == "odd-only" || text == "oddonly" || text == "OddOnly") return TieRule::OddOnly;
  throw ParameterError("unknown tie rule '" + std::string(text) + "' (expected fair-coin or odd-only)");
}

struct JuryParams {
  long n = 1;
  double p = 0.5;
  TieRule tie_rule = TieRule::FairCoin;
};

inline void validate(const JuryParams& params) {
  detail::require(params.n >= 1, "jury size n must be at least 1");
  detail::require(params.p >= 0.0 && params.p <= 1.0, "voter accuracy p must lie in [0, 1]");
  detail::require(params.tie_rule != TieRule::OddOnly || params.n % 2 == 1,
                  "tie rule odd-only requires an odd jury size");
}

/// Binomial upper tail P[K > n/2] (+ half the tie mass for even n under
/// FairCoin).
///
/// Terms are generated by the ratio recurrence
///   t(k+1) / t(k) = (n - k) / (k + 1) * p / (1 - p)
/// walking outward from the mode, where t(mode) = 1. Terms far in the tails
/// underflow to zero, which is harmless; dividing the tail sum by the total
/// removes the unknown scale C(n, mode) p^mode (1-p)^(n-mode). This stays
/// stable well past n = 10^6 without log-gamma or factorials.
inline double majority_probability(const JuryParams& params) {
  validate(params);
  const long n = params.n;
  const double p = params.p;
  if (n == 1) return p;

  // Degenerate voters: every outcome lands on k = n or k = 0.
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;

  const double up = p / (1.0 - p);
  const double down = (1.0 - p) / p;
  // Mode of Binomial(n, p).
  long mode = static_cast<long>(std::floor((n + 1) * p));
  if (mode > n) mode = n;

  const bool even = n % 2 == 0;
  const long half = n / 2;
  double total = 0.0;
  double upper = 0.0;  // k > n/2
  double tie = 0.0;    // k == n/2, even n only

  auto accumulate = [&](long k, double term) {
    total += term;
    if (2 * k > n) {
      upper += term;
    } else if (even && k == half) {
      tie = term;
    }
  };

  accumulate(mode, 1.0);
  double term = 1.0;
  for (long k = mode; k < n; ++k) {
    term *= static_cast<double>(n - k) / static_cast<double>(k + 1) * up;
    if (term == 0.0) break;
    accumulate(k + 1, term);
  }
  term = 1.0;
  for (long k = mode; k > 0; --k) {
    term *= static_cast<double>(k) / static_cast<double>(n - k + 1) * down;
    if (term == 0.0) break;
    accumulate(k - 1, term);
  }

  double result = upper / total;
  if (even && params.tie_rule == TieRule::FairCoin) result += 0.5 * tie / total;
  return result < 0.0 ? 0.0 : (result > 1.0 ? 1.0 : result);
}

struct SurfaceSpec {
  double p_min = 0.0;
  double p_max = 1.0;
  double p_step = 0.01;
  long n_min = 1;
  long n_max = 100;
};

/// Majority-correct probabilities on a (p, n) grid. Under OddOnly the even
/// jury sizes in [n_min, n_max] are skipped.
struct SurfaceGrid {
  SurfaceSpec spec;
  TieRule tie_rule = TieRule::FairCoin;
  std::vector<double> p_values;
  std::vector<long> n_values;
  std::vector<double> cells;  // row-major: p index major, n index minor

  double at(std::size_t p_index, std::size_t n_index) const {
    return cells[p_index * n_values.size() + n_index];
  }
};

/// Grid points p_min + i * p_step for i = 0, 1, ... while <= p_max (with a
/// small tolerance so that e.g. 0..1 step 0.01 yields 101 points).
inline std::vector<double> probability_grid(double p_min, double p_max, double p_step) {
  detail::require(p_step > 0.0, "p step must be positive");
  detail::require(p_min >= 0.0 && p_max <= 1.0 && p_min <= p_max, "p range must satisfy 0 <= p_min <= p_max <= 1");
  const auto count = static_cast<std::size_t>(std::floor((p_max - p_min) / p_step + 1e-9)) + 1;
  std::vector<double> values;
  values.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    double p = p_min + static_cast<double>(i) * p_step;
    values.push_back(p > 1.0 ? 1.0 : p);
  }
  return values;
}

inline SurfaceGrid condorcet_surface(const SurfaceSpec& spec, TieRule tie_rule = TieRule::FairCoin) {
  detail::require(spec.n_min >= 1, "n_min must be at least 1");
  detail::require(spec.n_max >= spec.n_min, "n range is empty");
  SurfaceGrid grid;
  grid.spec = spec;
  grid.tie_rule = tie_rule;
  grid.p_values = probability_grid(spec.p_min, spec.p_max, spec.p_step);
  for (long n = spec.n_min; n <= spec.n_max; ++n) {
    if (tie_rule == TieRule::OddOnly && n % 2 == 0) continue;
    grid.n_values.push_back(n);
  }
  detail::require(!grid.n_values.empty(), "grid contains no admissible jury sizes");
  grid.cells.reserve(grid.p_values.size() * grid.n_values.size());
  for (double p : grid.p_values)
    for (long n : grid.n_values) grid.cells.push_back(majority_probability({n, p, tie_rule}));
  return grid;
}

}  // namespace collective
