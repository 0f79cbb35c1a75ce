// Copyright 2026 The tfqkd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles/reference_values.hpp"
#include "tfqkd/channel_model.hpp"
#include "tfqkd/decoy_lp.hpp"
#include "tfqkd/errors.hpp"

namespace tfqkd {
namespace {

double poisson(double mu, int n) {
  if (mu == 0.0) return n == 0 ? 1.0 : 0.0;
  return std::exp(-mu + n * std::log(mu) - std::lgamma(n + 1.0));
}

DecoyObservations nominal_observations() {
  const ChannelScenario s{1.0, 1.0, 0.0, 0.02, 0.0};
  return simulate_observations(s, {0.1, 0.01, 0.0}, {0.1, 0.01, 0.0});
}

TEST(Widening, WorkedExample) {
  const auto w = widen_gain(1e-4, 1e10, 5.3);
  EXPECT_NEAR(w.upper, 1e-4 + 5.3e-7, 1e-20);
  EXPECT_NEAR(w.lower, 1e-4 - 5.3e-7, 1e-20);
}

TEST(Widening, ClampsAndZeroCounts) {
  EXPECT_EQ(widen_gain(1e-10, 1.0, 5.3).lower, 0.0);
  const auto zero = widen_gain(0.0, 1e12, 5.3);
  EXPECT_EQ(zero.lower, 0.0);
  EXPECT_EQ(zero.upper, 0.0);
  EXPECT_THROW(widen_gain(1.5, 1e3, 5.3), DomainError);
  EXPECT_THROW(widen_gain(0.1, 0.0, 5.3), DomainError);
  EXPECT_THROW(widen_gain(0.1, 1e3, -1.0), DomainError);
}

TEST(Widening, SigmaFromEpsilon) {
  EXPECT_NEAR(sigma_multiplier_for_epsilon(1e-7), reference::kSigmaForEpsilon1e7, 1e-12);
  EXPECT_NEAR(sigma_multiplier_for_epsilon(1e-7), 5.3, 0.05);
  EXPECT_NEAR(sigma_multiplier_for_epsilon(0.3173105078629141), 1.0, 1e-12);
  EXPECT_EQ(kDefaultSigmaMultiplier, 5.3);
  EXPECT_THROW(sigma_multiplier_for_epsilon(0.0), DomainError);
  EXPECT_THROW(sigma_multiplier_for_epsilon(1.0), DomainError);
}

TEST(TailMass, DirectSum) {
  EXPECT_EQ(poisson_tail_mass(0.0), 0.0);
  EXPECT_NEAR(poisson_tail_mass(0.5), reference::kTailMass05, 1e-24);
  EXPECT_NEAR(poisson_tail_mass(1.0), reference::kTailMass1, 1e-20);
  EXPECT_GT(poisson_tail_mass(1e-3), 0.0);
  // Large means: the direct sum agrees with the complement of the head.
  double head = 0.0;
  for (int n = 0; n < kPhotonCutoff; ++n) head += poisson(30.0, n);
  EXPECT_NEAR(poisson_tail_mass(30.0), 1.0 - head, 1e-14);
}

TEST(BuildProblem, Shape) {
  const LpProblem p = build_problem(nominal_observations(), false);
  EXPECT_EQ(p.variable_count(), 100);
  EXPECT_EQ(p.inequality_count(), 18);
  EXPECT_EQ(p.row_sources.size(), 9u);
  EXPECT_TRUE(p.warnings.empty());
  for (int v = 0; v < 100; ++v) {
    EXPECT_EQ(p.lp.var_lower[v], 0.0);
    EXPECT_EQ(p.lp.var_upper[v], 1.0);
  }
}

TEST(BuildProblem, PoissonCoefficientsAndTail) {
  const auto obs = nominal_observations();
  const LpProblem p = build_problem(obs, false);
  for (std::size_t r = 0; r < p.lp.rows.size(); ++r) {
    const auto [i, j] = p.row_sources[r];
    const double mu_a = obs.intensities_a[i];
    const double mu_b = obs.intensities_b[j];
    double head = 0.0;
    for (int n = 0; n < 10; ++n) {
      for (int m = 0; m < 10; ++m) {
        const double c = poisson(mu_a, n) * poisson(mu_b, m);
        EXPECT_NEAR(p.lp.rows[r][yield_variable({n, m})], c, 1e-16 + 1e-13 * c);
        head += c;
      }
    }
    EXPECT_EQ(p.lp.row_upper[r], obs.gains[i][j]);
    EXPECT_NEAR(obs.gains[i][j] - p.lp.row_lower[r], 1.0 - head, 1e-15);
  }
}

TEST(BuildProblem, FiniteWidening) {
  const ChannelScenario s{0.01, 0.1, 1e-8, 0.02, 0.0};
  const auto obs = simulate_observations(s, {0.3, 0.05, 0}, {0.1, 0.02, 0}, 1e12, {{0.2, 0.2, 0.1}, {0.25, 0.15, 0.1}});
  ASSERT_TRUE(obs.pulse_counts.has_value());
  EXPECT_DOUBLE_EQ((*obs.pulse_counts)[0][1], 1e12 * 0.2 * 0.15);
  const LpProblem p = build_problem(obs, true, 5.3);
  for (std::size_t r = 0; r < p.lp.rows.size(); ++r) {
    const auto [i, j] = p.row_sources[r];
    const auto w = widen_gain(obs.gains[i][j], (*obs.pulse_counts)[i][j], 5.3);
    EXPECT_EQ(p.lp.row_upper[r], w.upper);
  }
  EXPECT_THROW(build_problem(nominal_observations(), true), DomainError);
  EXPECT_THROW(build_problem(obs, true, 0.0), DomainError);
}

TEST(BuildProblem, DegenerateDecoysWarn) {
  const ChannelScenario s{1.0, 1.0, 0.0, 0.02, 0.0};
  const auto p = build_problem(simulate_observations(s, {0.1, 0.1, 0.0}, {0.1, 0.01, 0.0}), false);
  ASSERT_EQ(p.warnings.size(), 1u);
  EXPECT_NE(p.warnings[0].find("degenerate"), std::string::npos);
}

TEST(BuildProblem, ValidatesObservations) {
  DecoyObservations obs = nominal_observations();
  obs.gains[0][0] = 1.5;
  EXPECT_THROW(build_problem(obs, false), DomainError);
  obs = nominal_observations();
  obs.intensities_a = {0.01, 0.1, 0.0};
  EXPECT_THROW(build_problem(obs, false), DomainError);
  obs = nominal_observations();
  obs.gains.pop_back();
  EXPECT_THROW(build_problem(obs, false), DomainError);
  obs = nominal_observations();
  obs.pulse_counts = std::vector<std::vector<double>>(3, std::vector<double>(3, 0.0));
  EXPECT_THROW(build_problem(obs, false), DomainError);
}

TEST(BuildProblem, DumpListsRows) {
  const auto text = build_problem(nominal_observations(), false).dump();
  EXPECT_NE(text.find("18 inequalities"), std::string::npos);
  EXPECT_NE(text.find("row 0 (a0, b0)"), std::string::npos);
  EXPECT_NE(text.find("row 8 (a2, b2)"), std::string::npos);
  EXPECT_NE(text.find("Y9_9"), std::string::npos);
}

TEST(SolveUpperBound, AllZeroGains) {
  DecoyObservations obs = nominal_observations();
  for (auto& row : obs.gains) std::fill(row.begin(), row.end(), 0.0);
  const LpProblem p = build_problem(obs, false);
  for (double u : p.lp.row_upper) EXPECT_EQ(u, 0.0);
  EXPECT_NEAR(solve_upper_bound(p, {0, 0}), 0.0, 1.5e-9);
  EXPECT_NEAR(solve_upper_bound(p, {1, 1}), 0.0, 1.5e-9);
}

TEST(SolveUpperBound, MatchesIndependentSolverSymmetric) {
  const YieldBounds b = estimate_yield_bounds(build_problem(nominal_observations(), false));
  for (std::size_t k = 0; k < kBoundedYieldPairs.size(); ++k) {
    EXPECT_NEAR(b.get(kBoundedYieldPairs[k]) - 1e-9, reference::kLpSymmetricBounds[k], 2e-9) << k;
  }
}

TEST(SolveUpperBound, MatchesIndependentSolverFinite) {
  const ChannelScenario s{0.01, 0.1, 1e-8, 0.02, 0.0};
  const auto obs = simulate_observations(s, {0.3, 0.05, 0}, {0.1, 0.02, 0}, 1e12, {{0.2, 0.2, 0.1}, {0.25, 0.15, 0.1}});
  const YieldBounds b = estimate_yield_bounds(build_problem(obs, true, 5.3));
  for (std::size_t k = 0; k < kBoundedYieldPairs.size(); ++k) {
    const double ref = reference::kLpFiniteBounds[k];
    EXPECT_NEAR(b.get(kBoundedYieldPairs[k]) - 1e-9, ref, 1e-9 + 1e-7 * ref) << k;
  }
}

TEST(SolveUpperBound, TightNearExactYield) {
  const ChannelScenario s{1.0, 1.0, 0.0, 0.02, 0.0};
  const double u11 = solve_upper_bound(build_problem(nominal_observations(), false), {1, 1});
  const double y11 = yield_nm_asymptotic(s, 1, 1);
  EXPECT_GE(u11, y11);
  EXPECT_LE(u11, 1.1 * y11);
}

TEST(SolveUpperBound, RejectsTargetsOffGrid) {
  const LpProblem p = build_problem(nominal_observations(), false);
  EXPECT_THROW(solve_upper_bound(p, {10, 0}), DomainError);
  EXPECT_THROW(solve_upper_bound(p, {0, -1}), DomainError);
}

TEST(SolveUpperBound, InconsistentDataNamesPair) {
  DecoyObservations obs;
  obs.intensities_a = {0.1, 0.0};
  obs.intensities_b = {0.1, 0.0};
  obs.gains = {{0.0, 0.0}, {0.0, 0.5}};
  const LpProblem p = build_problem(obs, false);
  try {
    solve_upper_bound(p, {1, 1});
    FAIL() << "expected infeasibility";
  } catch (const InfeasibleLpError& e) {
    EXPECT_GE(e.intensity_a(), 0);
    EXPECT_LT(e.intensity_a(), 2);
    EXPECT_GE(e.intensity_b(), 0);
    EXPECT_LT(e.intensity_b(), 2);
    EXPECT_NE(std::string(e.what()).find("(a"), std::string::npos);
  }
}

// Gains produced by an arbitrary yield assignment, including photon numbers
// beyond the cutoff, never lead to a bound below the true yield.
TEST(Properties, SoundOnRandomYields) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    const int extent = 16;
    std::vector<double> y(extent * extent);
    for (double& v : y) v = u(rng);
    std::vector<double> mus_a{0.05 + 0.6 * u(rng), 0.0, 0.0};
    mus_a[1] = mus_a[0] * (0.05 + 0.5 * u(rng));
    std::vector<double> mus_b{0.05 + 0.6 * u(rng), 0.0, 0.0};
    mus_b[1] = mus_b[0] * (0.05 + 0.5 * u(rng));
    DecoyObservations obs;
    obs.intensities_a = mus_a;
    obs.intensities_b = mus_b;
    for (double ma : mus_a) {
      auto& row = obs.gains.emplace_back();
      double q = 0.0;
      for (double mb : mus_b) {
        q = 0.0;
        for (int n = 0; n < extent; ++n) {
          for (int m = 0; m < extent; ++m) q += poisson(ma, n) * poisson(mb, m) * y[n * extent + m];
        }
        row.push_back(std::min(1.0, q));
      }
    }
    const LpProblem p = build_problem(obs, false);
    // The truncated true vector is feasible.
    for (std::size_t r = 0; r < p.lp.rows.size(); ++r) {
      double a = 0.0;
      for (int n = 0; n < kPhotonCutoff; ++n) {
        for (int m = 0; m < kPhotonCutoff; ++m) a += p.lp.rows[r][yield_variable({n, m})] * y[n * extent + m];
      }
      EXPECT_GE(a, p.lp.row_lower[r] - 1e-14);
      EXPECT_LE(a, p.lp.row_upper[r] + 1e-14);
    }
    const YieldBounds b = estimate_yield_bounds(p);
    for (const PhotonPair pair : kBoundedYieldPairs) {
      EXPECT_GE(b.get(pair), y[pair.n_a * extent + pair.n_b]) << trial;
    }
  }
}

TEST(Properties, MonotoneWidening) {
  const ChannelScenario s{0.02, 0.2, 1e-8, 0.02, 0.0};
  const auto obs = simulate_observations(s, {0.2, 0.03, 0}, {0.2, 0.03, 0}, 1e10, {{0.2, 0.2, 0.2}, {0.2, 0.2, 0.2}});
  YieldBounds previous = estimate_yield_bounds(build_problem(obs, false));
  for (double sigma : {0.5, 2.0, 5.3, 10.0}) {
    const YieldBounds b = estimate_yield_bounds(build_problem(obs, true, sigma));
    for (const PhotonPair pair : kBoundedYieldPairs) EXPECT_GE(b.get(pair), previous.get(pair) - 1e-12);
    previous = b;
  }
}

TEST(Properties, DegenerateDecoysMatchReducedSet) {
  const ChannelScenario s{0.3, 0.6, 1e-7, 0.02, 0.0};
  const auto full = simulate_observations(s, {0.1, 0.1, 0.0}, {0.2, 0.02, 0.0});
  const auto reduced = simulate_observations(s, {0.1, 0.0}, {0.2, 0.02, 0.0});
  const YieldBounds a = estimate_yield_bounds(build_problem(full, false));
  const YieldBounds b = estimate_yield_bounds(build_problem(reduced, false));
  for (const PhotonPair pair : kBoundedYieldPairs) EXPECT_NEAR(a.get(pair), b.get(pair), 1e-9);
}

TEST(Properties, BitIdenticalReruns) {
  const ChannelScenario s{0.01, 0.1, 1e-8, 0.02, 0.0};
  const auto obs = simulate_observations(s, {0.3, 0.05, 0}, {0.1, 0.02, 0}, 1e12, {{0.2, 0.2, 0.1}, {0.25, 0.15, 0.1}});
  const LpProblem p = build_problem(obs, true);
  for (const PhotonPair pair : kBoundedYieldPairs) EXPECT_EQ(solve_upper_bound(p, pair), solve_upper_bound(p, pair));
}

}  // namespace
}  // namespace tfqkd
