#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "collective/condorcet.hpp"
#include "oracles.hpp"

using namespace collective;

TEST(MajorityProbability, SingleVoterIsExactlyP) {
  for (double p : {0.0, 0.1, 0.37, 0.5, 0.6, 0.999, 1.0}) EXPECT_EQ(majority_probability({1, p}), p);
  EXPECT_EQ(majority_probability({1, 0.6}), 0.6);
}

TEST(MajorityProbability, ThreeVoters) {
  // 0.6^3 + 3 * 0.6^2 * 0.4
  EXPECT_NEAR(majority_probability({3, 0.6}), 0.648, 1e-15);
  EXPECT_NEAR(oracle::enumerate_majority(3, 0.6), 0.648, 1e-15);
}

TEST(MajorityProbability, OddJuryAtHalfIsHalf) {
  EXPECT_NEAR(majority_probability({101, 0.5}), 0.5, 1e-14);
}

TEST(MajorityProbability, FrozenHighPrecisionValues) {
  // 40-digit evaluations of the binomial tail.
  EXPECT_NEAR(majority_probability({101, 0.6}), 0.97910330899529956536, 1e-13);
  EXPECT_NEAR(majority_probability({4, 0.6}), 0.648, 1e-14);
  EXPECT_NEAR(majority_probability({100, 0.55}), 0.8413478010629012053, 1e-13);
  EXPECT_NEAR(majority_probability({1000, 0.49}), 0.26357560835658546869, 1e-12);
  EXPECT_NEAR(majority_probability({10000, 0.51}), 0.97725796767542535794, 1e-11);
}

TEST(MajorityProbability, AgreesWithMonteCarlo) {
  const auto mc = oracle::simulate_majority(101, 0.6, 1'000'000, 20240601);
  EXPECT_NEAR(majority_probability({101, 0.6}), mc.mean, 3.0 * mc.std_error);
}

TEST(MajorityProbability, AgreesWithEnumeration) {
  std::mt19937_64 eng(7);
  std::uniform_int_distribution<int> size(1, 20);
  std::uniform_real_distribution<double> prob(0.0, 1.0);
  for (int c = 0; c < 20; ++c) {
    const int n = size(eng);
    const double p = prob(eng);
    EXPECT_NEAR(majority_probability({n, p}), oracle::enumerate_majority(n, p), 1e-10) << "n=" << n << " p=" << p;
  }
}

TEST(MajorityProbability, Symmetry) {
  for (long n : {1L, 2L, 7L, 10L, 55L, 100L, 999L, 1000L, 5000L}) {
    for (int i = 0; i <= 20; ++i) {
      const double p = i / 20.0;
      const double sum = majority_probability({n, p}) + majority_probability({n, 1.0 - p});
      EXPECT_NEAR(sum, 1.0, 1e-12) << "n=" << n << " p=" << p;
    }
  }
}

TEST(MajorityProbability, LightSideApproachesCertainty) {
  double prev = 0.0;
  for (long n = 1; n <= 2001; n += 2) {
    const double v = majority_probability({n, 0.6});
    EXPECT_GE(v, prev - 1e-15) << n;
    prev = v;
  }
  EXPECT_GE(majority_probability({2001, 0.6}), 1.0 - 1e-6);
}

TEST(MajorityProbability, DarkSideDecaysToZero) {
  double prev = 1.0;
  for (long n = 1; n <= 2001; n += 2) {
    const double v = majority_probability({n, 0.4});
    EXPECT_LE(v, prev + 1e-15) << n;
    prev = v;
  }
  EXPECT_LE(majority_probability({2001, 0.4}), 1e-6);
}

TEST(MajorityProbability, TieRules) {
  // Even split of two voters at p: P = p^2 + 0.5 * 2p(1-p) = p.
  EXPECT_NEAR(majority_probability({2, 0.7, TieRule::FairCoin}), 0.7, 1e-15);
  EXPECT_NO_THROW(majority_probability({3, 0.7, TieRule::OddOnly}));
  EXPECT_THROW(majority_probability({4, 0.7, TieRule::OddOnly}), ParameterError);
}

TEST(MajorityProbability, RejectsBadParameters) {
  EXPECT_THROW(majority_probability({0, 0.5}), ParameterError);
  EXPECT_THROW(majority_probability({5, -0.1}), ParameterError);
  EXPECT_THROW(majority_probability({5, 1.5}), ParameterError);
  EXPECT_THROW(majority_probability({5, std::nan("")}), ParameterError);
}

TEST(CondorcetSurface, SingleVoterRow) {
  const auto grid = condorcet_surface({0.0, 1.0, 0.5, 1, 1});
  ASSERT_EQ(grid.p_values.size(), 3u);
  ASSERT_EQ(grid.n_values.size(), 1u);
  EXPECT_EQ(grid.at(0, 0), 0.0);
  EXPECT_EQ(grid.at(1, 0), 0.5);
  EXPECT_EQ(grid.at(2, 0), 1.0);
}

TEST(CondorcetSurface, CertainVotersAlwaysWin) {
  const auto grid = condorcet_surface({1.0, 1.0, 0.1, 1, 50});
  for (std::size_t j = 0; j < grid.n_values.size(); ++j) EXPECT_EQ(grid.at(0, j), 1.0);
}

TEST(CondorcetSurface, FullGridShapeAndMonotonicity) {
  const auto grid = condorcet_surface({0.0, 1.0, 0.01, 1, 100});
  ASSERT_EQ(grid.p_values.size(), 101u);
  ASSERT_EQ(grid.n_values.size(), 100u);
  ASSERT_EQ(grid.cells.size(), 10100u);
  for (double c : grid.cells) {
    EXPECT_GE(c, 0.0);
    EXPECT_LE(c, 1.0);
  }
  for (std::size_t i = 0; i < grid.p_values.size(); ++i) {
    if (grid.p_values[i] <= 0.5) continue;
    for (std::size_t j = 2; j < grid.n_values.size(); j += 2)  // n = 1, 3, 5, ...
      EXPECT_GE(grid.at(i, j), grid.at(i, j - 2) - 1e-15);
  }
}

TEST(CondorcetSurface, OddOnlySkipsEvenJuries) {
  const auto grid = condorcet_surface({0.0, 1.0, 0.25, 1, 10}, TieRule::OddOnly);
  EXPECT_EQ(grid.n_values, (std::vector<long>{1, 3, 5, 7, 9}));
}

TEST(CondorcetSurface, RejectsEmptyGrid) {
  EXPECT_THROW(condorcet_surface({0.0, 1.0, 0.0, 1, 10}), ParameterError);
  EXPECT_THROW(condorcet_surface({0.0, 1.0, 0.1, 0, 10}), ParameterError);
  EXPECT_THROW(condorcet_surface({0.0, 1.0, 0.1, 5, 4}), ParameterError);
  EXPECT_THROW(condorcet_surface({0.0, 1.0, 0.1, 2, 2}, TieRule::OddOnly), ParameterError);
}
