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


#include "tfqkd/decoy_lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "tfqkd/errors.hpp"

namespace tfqkd {
namespace {

constexpr double kSafetyRoundUp = 1e-9;

std::vector<double> poisson_head(double mu) {
  std::vector<double> p(kPhotonCutoff, 0.0);
  p[0] = std::exp(-mu);
  for (int n = 1; n < kPhotonCutoff; ++n) p[n] = p[n - 1] * mu / n;
  return p;
}

void check_intensities(const std::vector<double>& intensities, const char* side) {
  if (intensities.empty()) throw DomainError(std::string("no decoy intensities for ") + side);
  for (std::size_t i = 0; i < intensities.size(); ++i) {
    if (!(intensities[i] >= 0.0) || !std::isfinite(intensities[i])) {
      throw DomainError(std::string("decoy intensity must be finite and non-negative for ") + side);
    }
    if (i > 0 && intensities[i] > intensities[i - 1]) {
      throw DomainError(std::string("decoy intensities must be non-increasing for ") + side);
    }
  }
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void DecoyObservations::validate() const {
  check_intensities(intensities_a, "Alice");
  check_intensities(intensities_b, "Bob");
  const auto rows = intensities_a.size();
  const auto cols = intensities_b.size();
  if (gains.size() != rows) throw DomainError("gain matrix row count differs from Alice's intensities");
  for (const auto& row : gains) {
    if (row.size() != cols) throw DomainError("gain matrix column count differs from Bob's intensities");
    for (double q : row) {
      if (!(q >= 0.0 && q <= 1.0)) throw DomainError("gains must lie in [0, 1]");
    }
  }
  if (pulse_counts) {
    if (pulse_counts->size() != rows) throw DomainError("pulse count matrix has the wrong shape");
    for (const auto& row : *pulse_counts) {
      if (row.size() != cols) throw DomainError("pulse count matrix has the wrong shape");
      for (double n : row) {
        if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("pulse counts must be positive");
      }
    }
  }
}

DecoyObservations simulate_observations(const ChannelScenario& scenario, std::vector<double> intensities_a,
                                        std::vector<double> intensities_b, std::optional<double> total_pulses,
                                        const DecoyProbabilities& probabilities) {
  scenario.validate();
  DecoyObservations obs;
  obs.intensities_a = std::move(intensities_a);
  obs.intensities_b = std::move(intensities_b);
  check_intensities(obs.intensities_a, "Alice");
  check_intensities(obs.intensities_b, "Bob");
  for (double mu_a : obs.intensities_a) {
    auto& row = obs.gains.emplace_back();
    for (double mu_b : obs.intensities_b) {
      row.push_back(z_basis_gain(scenario, arriving_intensities(scenario, mu_a, mu_b)));
    }
  }
  if (total_pulses) {
    if (!(*total_pulses > 0.0)) throw DomainError("total pulse count must be positive");
    if (probabilities.a.size() != obs.intensities_a.size() || probabilities.b.size() != obs.intensities_b.size()) {
      throw DomainError("decoy probabilities must parallel the intensities");
    }
    auto& counts = obs.pulse_counts.emplace();
    for (double p_a : probabilities.a) {
      auto& row = counts.emplace_back();
      for (double p_b : probabilities.b) row.push_back(*total_pulses * p_a * p_b);
    }
  }
  obs.validate();
  return obs;
}

GainInterval widen_gain(double gain, double pulse_count, double sigma_multiplier) {
  if (!(gain >= 0.0 && gain <= 1.0)) throw DomainError("gain must lie in [0, 1]");
  if (!(pulse_count > 0.0)) throw DomainError("pulse count must be positive");
  if (!(sigma_multiplier >= 0.0)) throw DomainError("sigma multiplier must be non-negative");
  const double delta = sigma_multiplier * std::sqrt(gain / pulse_count);
  return {std::max(0.0, gain - delta), gain + delta};
}

double sigma_multiplier_for_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
  double lo = 0.0;
  double hi = 40.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (std::erfc(mid / std::sqrt(2.0)) > epsilon ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double poisson_tail_mass(double mu) {
  if (!(mu >= 0.0)) throw DomainError("intensity must be non-negative");
  if (mu == 0.0) return 0.0;
  // e^-mu mu^c / c!, built in logs so large mu cannot overflow.
  double term = std::exp(-mu + kPhotonCutoff * std::log(mu) - std::lgamma(kPhotonCutoff + 1.0));
  double sum = 0.0;
  for (int n = kPhotonCutoff; term > 0.0; ++n) {
    sum += term;
    if (n > mu && term < 1e-18 * sum) break;
    term *= mu / (n + 1);
  }
  return std::min(1.0, sum);
}

LpProblem build_problem(const DecoyObservations& observations, bool finite_size, double sigma_multiplier) {
  observations.validate();
  if (finite_size) {
    if (!observations.pulse_counts) throw DomainError("finite-size analysis needs pulse counts");
    if (!(sigma_multiplier > 0.0)) throw DomainError("sigma multiplier must be positive");
  }

  LpProblem problem;
  auto& lp = problem.lp;
  lp.num_vars = kPhotonCutoff * kPhotonCutoff;
  lp.objective.assign(lp.num_vars, 0.0);
  lp.var_lower.assign(lp.num_vars, 0.0);
  lp.var_upper.assign(lp.num_vars, 1.0);

  auto warn_degenerate = [&](const std::vector<double>& v, const char* side) {
    for (std::size_t i = 1; i < v.size(); ++i) {
      if (v[i] == v[i - 1]) {
        problem.warnings.push_back(std::string("degenerate decoys on ") + side + ": intensities " +
                                   std::to_string(i - 1) + " and " + std::to_string(i) + " coincide");
      }
    }
  };
  warn_degenerate(observations.intensities_a, "Alice's side");
  warn_degenerate(observations.intensities_b, "Bob's side");

  for (std::size_t i = 0; i < observations.intensities_a.size(); ++i) {
    const double mu_a = observations.intensities_a[i];
    const auto p_a = poisson_head(mu_a);
    const double tail_a = poisson_tail_mass(mu_a);
    for (std::size_t j = 0; j < observations.intensities_b.size(); ++j) {
      const double mu_b = observations.intensities_b[j];
      const auto p_b = poisson_head(mu_b);
      const double tail_b = poisson_tail_mass(mu_b);

      std::vector<double> row(lp.num_vars);
      for (int n = 0; n < kPhotonCutoff; ++n) {
        for (int m = 0; m < kPhotonCutoff; ++m) row[yield_variable({n, m})] = p_a[n] * p_b[m];
      }
      const double q = observations.gains[i][j];
      GainInterval interval{q, q};
      if (finite_size) interval = widen_gain(q, (*observations.pulse_counts)[i][j], sigma_multiplier);
      // Pairs with either photon number at the cutoff or above are left out;
      // their yields lie in [0, 1], so they account for at most this mass.
      const double tail = tail_a + tail_b - tail_a * tail_b;

      lp.rows.push_back(std::move(row));
      lp.row_lower.push_back(interval.lower - tail);
      lp.row_upper.push_back(interval.upper);
      problem.row_sources.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
  }
  return problem;
}

std::string LpProblem::dump() const {
  std::ostringstream out;
  out << "# variables: Y_nm for 0 <= n, m < " << kPhotonCutoff << " (" << lp.num_vars << "), box [0, 1]\n";
  out << "# rows: " << lp.rows.size() << " ranged, " << inequality_count() << " inequalities\n";
  for (const auto& w : warnings) out << "# warning: " << w << "\n";
  for (std::size_t r = 0; r < lp.rows.size(); ++r) {
    out << "row " << r << " (a" << row_sources[r].first << ", b" << row_sources[r].second << "): "
        << format_double(lp.row_lower[r]) << " <= sum <= " << format_double(lp.row_upper[r]) << "\n";
    for (int v = 0; v < lp.num_vars; ++v) {
      const double c = lp.rows[r][static_cast<std::size_t>(v)];
      if (c == 0.0) continue;
      out << "  Y" << v / kPhotonCutoff << "_" << v % kPhotonCutoff << " " << format_double(c) << "\n";
    }
  }
  return out.str();
}

double solve_upper_bound(const LpProblem& problem, PhotonPair target) {
  if (target.n_a < 0 || target.n_b < 0 || target.n_a >= kPhotonCutoff || target.n_b >= kPhotonCutoff) {
    throw DomainError("target yield outside the LP variable grid");
  }
  lp::DenseLp lp = problem.lp;
  std::fill(lp.objective.begin(), lp.objective.end(), 0.0);
  lp.objective[yield_variable(target)] = 1.0;
  const lp::LpSolution solution = lp::maximize(lp);
  switch (solution.status) {
    case lp::LpStatus::kOptimal:
      break;
    case lp::LpStatus::kInfeasible: {
      const int row = std::max(0, solution.violated_row);
      const auto [i_a, i_b] = problem.row_sources.at(static_cast<std::size_t>(row));
      throw InfeasibleLpError("decoy observations are inconsistent at intensity pair (a" + std::to_string(i_a) +
                                  ", b" + std::to_string(i_b) + ")",
                              i_a, i_b);
    }
    default:
      // Boxed variables cannot be unbounded; this is an iteration blow-up.
      throw std::runtime_error("decoy LP did not converge");
  }
  return std::clamp(solution.objective + kSafetyRoundUp, 0.0, 1.0);
}

YieldBounds estimate_yield_bounds(const LpProblem& problem) {
  YieldBounds bounds;
  for (const PhotonPair pair : kBoundedYieldPairs) bounds.set(pair, solve_upper_bound(problem, pair));
  return bounds;
}

}  // namespace tfqkd
