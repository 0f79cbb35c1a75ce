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


// Key-rate evaluation of a full parameter set and its optimisation under the
// four operating strategies compared for asymmetric channels.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tfqkd/channel_model.hpp"
#include "tfqkd/decoy_lp.hpp"
#include "tfqkd/yields.hpp"

namespace tfqkd {

/// Intensities and selection probabilities of both senders. The vacuum decoy
/// omega is fixed at zero and its probability is what the others leave over.
struct ProtocolParameters {
  double s_a = 0.1, mu_a = 0.1, nu_a = 0.01, omega_a = 0.0;
  double s_b = 0.1, mu_b = 0.1, nu_b = 0.01, omega_b = 0.0;
  double p_s_a = 0.5, p_mu_a = 0.2, p_nu_a = 0.2;
  double p_s_b = 0.5, p_mu_b = 0.2, p_nu_b = 0.2;

  double p_omega_a() const { return 1.0 - p_s_a - p_mu_a - p_nu_a; }
  double p_omega_b() const { return 1.0 - p_s_b - p_mu_b - p_nu_b; }

  /// Throws DomainError on negative intensities; with `check_probabilities`
  /// also on probabilities outside (0, 1) or summing to one or more per side.
  void validate(bool check_probabilities) const;
};

enum class Strategy { kSymmetric, kAddFibre, kSignalOnlyAsymmetric, kFullyAsymmetric };

inline constexpr Strategy kAllStrategies[] = {Strategy::kSymmetric, Strategy::kAddFibre,
                                              Strategy::kSignalOnlyAsymmetric, Strategy::kFullyAsymmetric};

/// snake_case name, e.g. "signal_only_asymmetric".
std::string_view strategy_name(Strategy strategy);
std::optional<Strategy> parse_strategy(std::string_view name);

/// Infinite decoys with exactly known yields, or three decoys analysed by LP
/// with finite-size widening over `total_pulses` pulses.
struct EvaluationMode {
  bool finite = false;
  double total_pulses = 1e12;
  double sigma_multiplier = kDefaultSigmaMultiplier;

  static EvaluationMode asymptotic() { return {}; }
  static EvaluationMode finite_size(double total_pulses, double sigma_multiplier = kDefaultSigmaMultiplier) {
    return {true, total_pulses, sigma_multiplier};
  }
};

struct KeyRateReport {
  double p_xx = 0.0;        ///< X-basis gain, one pattern
  double e_xx = 0.0;        ///< X-basis QBER
  YieldBounds yields;       ///< yield upper bounds used in the phase-error bound
  double e_zz_upper = 1.0;  ///< phase-error upper bound
  double basis_weight = 1.0;
  double rate_per_pattern = 0.0;  ///< weighted, one pattern
  double key_rate = 0.0;          ///< weighted, both patterns
  double raw_key_rate = 0.0;      ///< both patterns, basis weight 1
  bool no_key = false;            ///< X-basis gain vanished
  std::vector<std::string> warnings;
};

/// Evaluates parameter sets against one scenario. The infinite-decoy yield
/// table depends only on the channel, so it is built once here. Thread-safe
/// for concurrent const use.
class KeyRateEvaluator {
 public:
  /// Largest photon number in the cached infinite-decoy table.
  static constexpr int kAsymptoticTableMaxPhotons = 12;

  KeyRateEvaluator(const ChannelScenario& scenario, EvaluationMode mode);

  KeyRateReport evaluate(const ProtocolParameters& params) const;

  /// Finite mode only: the LP behind evaluate(params).
  LpProblem decoy_problem(const ProtocolParameters& params) const;

  const ChannelScenario& scenario() const { return scenario_; }
  const EvaluationMode& mode() const { return mode_; }

 private:
  ChannelScenario scenario_;
  EvaluationMode mode_;
  YieldBounds asymptotic_table_;
};

KeyRateReport evaluate_key_rate(const ChannelScenario& scenario, const ProtocolParameters& params,
                                const EvaluationMode& mode);

/// Both transmittances lowered to the worse of the two.
ChannelScenario add_fibre_transform(const ChannelScenario& scenario);

struct SearchOptions {
  /// Also search decoy intensities and probabilities; otherwise only the
  /// signal intensities move.
  bool search_decoys = false;
  double relative_tolerance = 1e-4;
  int max_passes = 50;
  int bracket_points = 9;
  int golden_iterations = 30;
  double min_intensity = 1e-4;
  double max_intensity = 1.0;
  double min_probability = 1e-3;
  double max_probability = 0.99;
};

struct SearchResult {
  ProtocolParameters params;
  double rate = 0.0;
  int passes = 0;
  long evaluations = 0;
};

using Objective = std::function<double(const ProtocolParameters&)>;

/// Free coordinates of `strategy` in the order they are visited.
std::vector<std::string> free_coordinates(Strategy strategy, bool search_decoys);

/// Copies the tied parameters of `strategy` from Alice to Bob and clamps
/// everything into the search boxes.
ProtocolParameters conform(const ProtocolParameters& params, Strategy strategy, const SearchOptions& options);

/// Cyclic coordinate ascent. Each coordinate is bracketed on a coarse grid
/// over its box, then refined by golden-section search; a move is kept only
/// if it raises the objective. NaN objective values count as -infinity.
SearchResult coordinate_descent(const Objective& objective, const ProtocolParameters& init, Strategy strategy,
                                const SearchOptions& options = {});

struct MultistartOptions {
  int n_starts = 4;
  std::uint64_t seed = 1;
  int workers = 1;
  SearchOptions search;
};

/// Start `index` of the seeded sequence: intensities log-uniform over the
/// box, probabilities from a flat Dirichlet over the four choices.
ProtocolParameters random_start(std::uint64_t seed, int index, Strategy strategy, const SearchOptions& options);

/// Best of coordinate_descent runs from random_start(seed, 0..n_starts-1);
/// the lowest start index wins ties whatever the completion order.
SearchResult multistart(const Objective& objective, Strategy strategy, const MultistartOptions& options);

struct OptimizationResult {
  Strategy strategy = Strategy::kSymmetric;
  ChannelScenario evaluated_scenario;  ///< padded for add-fibre
  SearchResult search;
  KeyRateReport report;
};

/// Optimises the key rate of `scenario` under `strategy`. Add-fibre runs the
/// symmetric search on the padded channel.
OptimizationResult optimize_strategy(const ChannelScenario& scenario, Strategy strategy, const EvaluationMode& mode,
                                     MultistartOptions options);

}  // namespace tfqkd
