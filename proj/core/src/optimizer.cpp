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


#include "tfqkd/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <random>
#include <thread>

#include "tfqkd/errors.hpp"
#include "tfqkd/security_bound.hpp"

namespace tfqkd {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Smallest ratio mu / nu the search keeps between the two decoys.
constexpr double kDecoyGap = 1.001;

enum class Kind { kIntensity, kProbability };

// One search coordinate. `side` is 'a', 'b' or 't' (tied: written to both).
struct Coordinate {
  std::string name;
  Kind kind;
  char side;
  double ProtocolParameters::*field_a;
  double ProtocolParameters::*field_b;
};

using P = ProtocolParameters;

Coordinate tied(std::string name, Kind kind, double P::*a, double P::*b) { return {std::move(name), kind, 't', a, b}; }
Coordinate own_a(std::string name, Kind kind, double P::*a) { return {std::move(name), kind, 'a', a, nullptr}; }
Coordinate own_b(std::string name, Kind kind, double P::*b) { return {std::move(name), kind, 'b', nullptr, b}; }

std::vector<Coordinate> coordinates(Strategy strategy, bool search_decoys) {
  const Kind I = Kind::kIntensity;
  const Kind Q = Kind::kProbability;
  std::vector<Coordinate> out;
  const bool symmetric = strategy == Strategy::kSymmetric || strategy == Strategy::kAddFibre;
  if (symmetric) {
    out.push_back(tied("s", I, &P::s_a, &P::s_b));
  } else {
    out.push_back(own_a("s_a", I, &P::s_a));
    out.push_back(own_b("s_b", I, &P::s_b));
  }
  if (!search_decoys) return out;
  if (strategy == Strategy::kFullyAsymmetric) {
    out.push_back(own_a("mu_a", I, &P::mu_a));
    out.push_back(own_a("nu_a", I, &P::nu_a));
    out.push_back(own_b("mu_b", I, &P::mu_b));
    out.push_back(own_b("nu_b", I, &P::nu_b));
    out.push_back(own_a("p_s_a", Q, &P::p_s_a));
    out.push_back(own_a("p_mu_a", Q, &P::p_mu_a));
    out.push_back(own_a("p_nu_a", Q, &P::p_nu_a));
    out.push_back(own_b("p_s_b", Q, &P::p_s_b));
    out.push_back(own_b("p_mu_b", Q, &P::p_mu_b));
    out.push_back(own_b("p_nu_b", Q, &P::p_nu_b));
  } else {
    out.push_back(tied("mu", I, &P::mu_a, &P::mu_b));
    out.push_back(tied("nu", I, &P::nu_a, &P::nu_b));
    out.push_back(tied("p_s", Q, &P::p_s_a, &P::p_s_b));
    out.push_back(tied("p_mu", Q, &P::p_mu_a, &P::p_mu_b));
    out.push_back(tied("p_nu", Q, &P::p_nu_a, &P::p_nu_b));
  }
  return out;
}

double read(const P& p, const Coordinate& c) { return c.field_a ? p.*c.field_a : p.*c.field_b; }

void write(P& p, const Coordinate& c, double v) {
  if (c.field_a) p.*c.field_a = v;
  if (c.field_b) p.*c.field_b = v;
}

// Search space coordinate: log10 for intensities, identity for probabilities.
double to_search(const Coordinate& c, double v) { return c.kind == Kind::kIntensity ? std::log10(v) : v; }
double from_search(const Coordinate& c, double t) { return c.kind == Kind::kIntensity ? std::pow(10.0, t) : t; }

// Interval of values the coordinate may take with every other one held.
std::pair<double, double> box(const P& p, const Coordinate& c, const SearchOptions& o) {
  const bool use_a = c.field_a != nullptr;
  if (c.kind == Kind::kIntensity) {
    double lo = o.min_intensity;
    double hi = o.max_intensity;
    if (c.field_a == &P::mu_a || c.field_b == &P::mu_b) lo = std::max(lo, (use_a ? p.nu_a : p.nu_b) * kDecoyGap);
    if (c.field_a == &P::nu_a || c.field_b == &P::nu_b) hi = std::min(hi, (use_a ? p.mu_a : p.mu_b) / kDecoyGap);
    return {lo, hi};
  }
  const double side_sum = use_a ? p.p_s_a + p.p_mu_a + p.p_nu_a : p.p_s_b + p.p_mu_b + p.p_nu_b;
  const double others = side_sum - read(p, c);
  return {o.min_probability, std::min(o.max_probability, 1.0 - o.min_probability - others)};
}

double safe(const Objective& f, const P& p, long& evaluations) {
  ++evaluations;
  const double v = f(p);
  return std::isnan(v) ? kNegInf : v;
}

void conform_side(double& mu, double& nu, double& ps, double& pm, double& pn, const SearchOptions& o) {
  mu = std::clamp(mu, o.min_intensity, o.max_intensity);
  nu = std::clamp(nu, o.min_intensity, o.max_intensity);
  if (mu < nu) std::swap(mu, nu);
  if (mu < nu * kDecoyGap) {
    if (nu * kDecoyGap <= o.max_intensity) {
      mu = nu * kDecoyGap;
    } else {
      nu = mu / kDecoyGap;
    }
  }
  ps = std::clamp(ps, o.min_probability, o.max_probability);
  pm = std::clamp(pm, o.min_probability, o.max_probability);
  pn = std::clamp(pn, o.min_probability, o.max_probability);
  const double limit = 1.0 - o.min_probability;
  const double sum = ps + pm + pn;
  if (sum > limit) {
    // Shrink the excess over the floors proportionally.
    const double excess_room = limit - 3 * o.min_probability;
    const double scale = excess_room / (sum - 3 * o.min_probability);
    ps = o.min_probability + (ps - o.min_probability) * scale;
    pm = o.min_probability + (pm - o.min_probability) * scale;
    pn = o.min_probability + (pn - o.min_probability) * scale;
  }
}

double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

void ProtocolParameters::validate(bool check_probabilities) const {
  for (double v : {s_a, mu_a, nu_a, omega_a, s_b, mu_b, nu_b, omega_b}) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("intensities must be finite and non-negative");
  }
  if (mu_a < nu_a || nu_a < omega_a || mu_b < nu_b || nu_b < omega_b) {
    throw DomainError("decoy intensities must satisfy mu >= nu >= omega");
  }
  if (!check_probabilities) return;
  for (double v : {p_s_a, p_mu_a, p_nu_a, p_s_b, p_mu_b, p_nu_b}) {
    if (!(v > 0.0 && v < 1.0)) throw DomainError("selection probabilities must lie in (0, 1)");
  }
  if (!(p_omega_a() > 0.0) || !(p_omega_b() > 0.0)) {
    throw DomainError("selection probabilities must leave room for the vacuum decoy");
  }
}

std::string_view strategy_name(Strategy strategy) {
  switch (strategy) {
    case Strategy::kSymmetric:
      return "symmetric";
    case Strategy::kAddFibre:
      return "add_fibre";
    case Strategy::kSignalOnlyAsymmetric:
      return "signal_only_asymmetric";
    case Strategy::kFullyAsymmetric:
      return "fully_asymmetric";
  }
  return "unknown";
}

std::optional<Strategy> parse_strategy(std::string_view name) {
  for (Strategy s : kAllStrategies) {
    if (strategy_name(s) == name) return s;
  }
  return std::nullopt;
}

KeyRateEvaluator::KeyRateEvaluator(const ChannelScenario& scenario, EvaluationMode mode)
    : scenario_(scenario), mode_(mode) {
  scenario_.validate();
  if (mode_.finite) {
    if (!(mode_.total_pulses > 0.0)) throw DomainError("total pulse count must be positive");
    if (!(mode_.sigma_multiplier > 0.0)) throw DomainError("sigma multiplier must be positive");
  } else {
    asymptotic_table_ = asymptotic_yield_table(scenario_, kAsymptoticTableMaxPhotons);
  }
}

LpProblem KeyRateEvaluator::decoy_problem(const ProtocolParameters& p) const {
  if (!mode_.finite) throw DomainError("the decoy LP exists only in finite mode");
  p.validate(true);
  const DecoyObservations obs =
      simulate_observations(scenario_, {p.mu_a, p.nu_a, p.omega_a}, {p.mu_b, p.nu_b, p.omega_b},
                            mode_.total_pulses,
                            {{p.p_mu_a, p.p_nu_a, p.p_omega_a()}, {p.p_mu_b, p.p_nu_b, p.p_omega_b()}});
  return build_problem(obs, true, mode_.sigma_multiplier);
}

KeyRateReport KeyRateEvaluator::evaluate(const ProtocolParameters& p) const {
  p.validate(mode_.finite);
  KeyRateReport report;
  report.basis_weight = mode_.finite ? p.p_s_a * p.p_s_b : 1.0;

  const ArrivingIntensities gamma = arriving_intensities(scenario_, p.s_a, p.s_b);
  report.p_xx = x_basis_gain(scenario_, gamma);
  if (!(report.p_xx > 0.0)) {
    report.no_key = true;
    report.e_xx = 0.5;
    return report;
  }
  report.e_xx = x_basis_qber(scenario_, gamma);

  if (mode_.finite) {
    const LpProblem problem = decoy_problem(p);
    report.warnings = problem.warnings;
    report.yields = estimate_yield_bounds(problem);
  } else {
    report.yields = asymptotic_table_;
  }

  const auto cat_a = cat_coefficients(std::sqrt(p.s_a));
  const auto cat_b = cat_coefficients(std::sqrt(p.s_b));
  report.e_zz_upper = phase_error_upper_bound(report.p_xx, cat_a, cat_b, report.yields);

  report.rate_per_pattern = key_rate(report.p_xx, report.e_xx, report.e_zz_upper, 1, report.basis_weight);
  report.key_rate = 2.0 * report.rate_per_pattern;
  report.raw_key_rate = key_rate(report.p_xx, report.e_xx, report.e_zz_upper, 2, 1.0);
  return report;
}

KeyRateReport evaluate_key_rate(const ChannelScenario& scenario, const ProtocolParameters& params,
                                const EvaluationMode& mode) {
  return KeyRateEvaluator(scenario, mode).evaluate(params);
}

ChannelScenario add_fibre_transform(const ChannelScenario& scenario) {
  scenario.validate();
  ChannelScenario out = scenario;
  out.eta_a = out.eta_b = std::min(scenario.eta_a, scenario.eta_b);
  return out;
}

std::vector<std::string> free_coordinates(Strategy strategy, bool search_decoys) {
  std::vector<std::string> names;
  for (const auto& c : coordinates(strategy, search_decoys)) names.push_back(c.name);
  return names;
}

ProtocolParameters conform(const ProtocolParameters& params, Strategy strategy, const SearchOptions& o) {
  P p = params;
  p.omega_a = p.omega_b = 0.0;
  p.s_a = std::clamp(p.s_a, o.min_intensity, o.max_intensity);
  p.s_b = std::clamp(p.s_b, o.min_intensity, o.max_intensity);
  if (strategy == Strategy::kSymmetric || strategy == Strategy::kAddFibre) p.s_b = p.s_a;
  if (strategy != Strategy::kFullyAsymmetric) {
    p.mu_b = p.mu_a;
    p.nu_b = p.nu_a;
    p.p_s_b = p.p_s_a;
    p.p_mu_b = p.p_mu_a;
    p.p_nu_b = p.p_nu_a;
  }
  conform_side(p.mu_a, p.nu_a, p.p_s_a, p.p_mu_a, p.p_nu_a, o);
  conform_side(p.mu_b, p.nu_b, p.p_s_b, p.p_mu_b, p.p_nu_b, o);
  return p;
}

SearchResult coordinate_descent(const Objective& objective, const ProtocolParameters& init, Strategy strategy,
                                const SearchOptions& o) {
  if (o.bracket_points < 3 || o.golden_iterations < 0 || o.max_passes < 1) {
    throw DomainError("search options out of range");
  }
  const auto coords = coordinates(strategy, o.search_decoys);
  SearchResult result;
  result.params = conform(init, strategy, o);
  result.rate = safe(objective, result.params, result.evaluations);

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int pass = 0; pass < o.max_passes; ++pass) {
    const double before = result.rate;
    for (const auto& c : coords) {
      auto [lo_v, hi_v] = box(result.params, c, o);
      if (!(hi_v > lo_v)) continue;
      const double lo = to_search(c, lo_v);
      const double hi = to_search(c, hi_v);

      P trial = result.params;
      double best_t = to_search(c, read(result.params, c));
      double best_f = result.rate;
      auto eval = [&](double t) {
        t = std::clamp(t, lo, hi);
        write(trial, c, from_search(c, t));
        const double f = safe(objective, trial, result.evaluations);
        if (f > best_f) {
          best_f = f;
          best_t = t;
        }
        return f;
      };

      // Coarse grid to find the basin, then golden-section inside it.
      const int k_points = o.bracket_points;
      const double step = (hi - lo) / (k_points - 1);
      int best_k = 0;
      double best_grid = kNegInf;
      for (int k = 0; k < k_points; ++k) {
        const double f = eval(lo + k * step);
        if (f > best_grid) {
          best_grid = f;
          best_k = k;
        }
      }
      double a = lo + std::max(0, best_k - 1) * step;
      double b = lo + std::min(k_points - 1, best_k + 1) * step;
      double x1 = b - inv_phi * (b - a);
      double x2 = a + inv_phi * (b - a);
      double f1 = eval(x1);
      double f2 = eval(x2);
      for (int it = 0; it < o.golden_iterations; ++it) {
        if (f1 >= f2) {
          b = x2;
          x2 = x1;
          f2 = f1;
          x1 = b - inv_phi * (b - a);
          f1 = eval(x1);
        } else {
          a = x1;
          x1 = x2;
          f1 = f2;
          x2 = a + inv_phi * (b - a);
          f2 = eval(x2);
        }
      }

      if (best_f > result.rate) {
        write(result.params, c, from_search(c, best_t));
        result.rate = best_f;
      }
    }
    result.passes = pass + 1;
    const double gain = result.rate - before;
    if (!(gain > o.relative_tolerance * std::fabs(result.rate))) break;
  }
  return result;
}

ProtocolParameters random_start(std::uint64_t seed, int index, Strategy strategy, const SearchOptions& o) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index)};
  std::mt19937_64 rng(seq);
  const double lo = std::log10(o.min_intensity);
  const double hi = std::log10(o.max_intensity);
  auto intensity = [&] { return std::pow(10.0, lo + (hi - lo) * uniform(rng)); };
  auto simplex = [&](double& ps, double& pm, double& pn) {
    double e[4];
    double total = 0.0;
    for (double& v : e) {
      v = -std::log1p(-uniform(rng));
      total += v;
    }
    ps = e[0] / total;
    pm = e[1] / total;
    pn = e[2] / total;
  };
  P p;
  p.s_a = intensity();
  p.mu_a = intensity();
  p.nu_a = intensity();
  p.s_b = intensity();
  p.mu_b = intensity();
  p.nu_b = intensity();
  simplex(p.p_s_a, p.p_mu_a, p.p_nu_a);
  simplex(p.p_s_b, p.p_mu_b, p.p_nu_b);
  return conform(p, strategy, o);
}

SearchResult multistart(const Objective& objective, Strategy strategy, const MultistartOptions& options) {
  if (options.n_starts < 1) throw DomainError("multistart needs at least one start");
  const int n = options.n_starts;
  std::vector<SearchResult> results(static_cast<std::size_t>(n));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
  std::atomic<int> next{0};
  auto work = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        results[i] = coordinate_descent(objective, random_start(options.seed, i, strategy, options.search), strategy,
                                        options.search);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int workers = std::clamp(options.workers, 1, n);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::size_t best = 0;
  long evaluations = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    evaluations += results[i].evaluations;
    if (results[i].rate > results[best].rate) best = i;
  }
  SearchResult out = results[best];
  out.evaluations = evaluations;
  return out;
}

OptimizationResult optimize_strategy(const ChannelScenario& scenario, Strategy strategy, const EvaluationMode& mode,
                                     MultistartOptions options) {
  OptimizationResult out;
  out.strategy = strategy;
  out.evaluated_scenario = strategy == Strategy::kAddFibre ? add_fibre_transform(scenario) : scenario;
  options.search.search_decoys = mode.finite;
  const KeyRateEvaluator evaluator(out.evaluated_scenario, mode);
  const Objective objective = [&evaluator](const ProtocolParameters& p) {
    try {
      return evaluator.evaluate(p).key_rate;
    } catch (const InfeasibleLpError&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };
  out.search = multistart(objective, strategy, options);
  out.report = evaluator.evaluate(out.search.params);
  return out;
}

}  // namespace tfqkd
