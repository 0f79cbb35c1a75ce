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

// Decoy-state estimation of photon-number yields. Each pair of decoy
// intensities (mu_i for Alice, mu_j for Bob) gives one observed Z-basis gain
//
//   Q_ij = sum_{n,m} P_n(mu_i) P_m(mu_j) Y_nm ,
//
// with Poisson weights P_n(mu) = e^-mu mu^n / n!. Keeping the yields with
// n, m < kPhotonCutoff as variables and bounding the rest by one turns every
// gain into a ranged row; maximising a single Y_nm over that polytope gives
// its upper bound.

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tfqkd/channel_model.hpp"
#include "tfqkd/simplex.hpp"
#include "tfqkd/yields.hpp"

namespace tfqkd {

/// Photon numbers below this are LP variables on each side.
inline constexpr int kPhotonCutoff = 10;

/// z-score used for the finite-size intervals unless configured otherwise.
inline constexpr double kDefaultSigmaMultiplier = 5.3;

/// Z-basis statistics of one detection pattern.
struct DecoyObservations {
  std::vector<double> intensities_a;       ///< mu, nu, omega; non-increasing
  std::vector<double> intensities_b;
  std::vector<std::vector<double>> gains;  ///< gains[i][j] for (a_i, b_j)
  /// Effective pulse counts N P_i P_j, required for finite-size analysis.
  std::optional<std::vector<std::vector<double>>> pulse_counts;

  /// Throws DomainError on shape mismatch, gains outside [0, 1], negative or
  /// increasing intensities, or non-positive pulse counts.
  void validate() const;
};

/// Selection probabilities of the decoy intensities on one side, parallel to
/// the intensity list.
struct DecoyProbabilities {
  std::vector<double> a;
  std::vector<double> b;
};

/// Gains predicted by the channel model for every intensity pair. With
/// `total_pulses` and probabilities the pulse counts N P_i P_j are attached.
DecoyObservations simulate_observations(const ChannelScenario& scenario,
                                        std::vector<double> intensities_a,
                                        std::vector<double> intensities_b,
                                        std::optional<double> total_pulses = std::nullopt,
                                        const DecoyProbabilities& probabilities = {});

/// Confidence interval [lower, upper] around an observed gain.
struct GainInterval {
  double lower = 0.0;
  double upper = 0.0;
};

/// Q +- sigma sqrt(Q / pulse_count), lower end clamped at zero. Throws
/// DomainError for Q outside [0, 1], pulse_count <= 0 or sigma < 0.
GainInterval widen_gain(double gain, double pulse_count, double sigma_multiplier);

/// Two-sided z-score z with erfc(z / sqrt 2) = epsilon. Throws DomainError
/// unless 0 < epsilon < 1.
double sigma_multiplier_for_epsilon(double epsilon);

/// Poisson probability that a pulse of mean mu holds at least kPhotonCutoff
/// photons, summed directly rather than as one minus the head.
double poisson_tail_mass(double mu);

/// Column of Y_nm in the LP.
constexpr int yield_variable(PhotonPair pair) { return pair.n_a * kPhotonCutoff + pair.n_b; }

struct LpProblem {
  lp::DenseLp lp;  ///< objective left at zero
  /// Intensity indices (i_a, i_b) behind each row.
  std::vector<std::pair<int, int>> row_sources;
  std::vector<std::string> warnings;

  int variable_count() const { return lp.num_vars; }
  /// Each ranged row stands for a lower and an upper inequality.
  int inequality_count() const { return 2 * static_cast<int>(lp.rows.size()); }

  /// Plain-text listing of every row, its bounds and the variable box.
  std::string dump() const;
};

/// Builds the ranged-row LP. In finite mode each gain is first widened with
/// widen_gain. Equal adjacent intensities add a warning, since such a pair
/// carries no more information than one of them alone.
LpProblem build_problem(const DecoyObservations& observations, bool finite_size,
                        double sigma_multiplier = kDefaultSigmaMultiplier);

/// Maximum of Y_target over the LP, rounded up by 1e-9 and clamped to
/// [0, 1]. Throws DomainError for targets outside the variable grid and
/// InfeasibleLpError naming the offending intensity pair.
double solve_upper_bound(const LpProblem& problem, PhotonPair target);

/// Upper bounds for every pair in kBoundedYieldPairs.
YieldBounds estimate_yield_bounds(const LpProblem& problem);

}  // namespace tfqkd
