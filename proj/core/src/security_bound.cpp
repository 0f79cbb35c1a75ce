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

#include "tfqkd/security_bound.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tfqkd/errors.hpp"

namespace tfqkd {
namespace {

constexpr double kMaxAlpha = 10.0;

// Upper bound on the Poisson tail sum_{n > last} e^{-s} s^n / n! given the
// first omitted term. The ratio of consecutive terms after it is at most
// s / (last + 2), so the tail is dominated by a geometric series.
double poisson_tail_bound(double next_term, double s, int last) {
  const double ratio = s / static_cast<double>(last + 2);
  if (ratio >= 1.0) return 1.0;
  return next_term / (1.0 - ratio);
}

}  // namespace

double CatStateCoefficients::amplitude(int parity, int n) const {
  if (n < 0 || n > n_max || (n & 1) != parity) return 0.0;
  const auto& list = parity == 0 ? even : odd;
  const auto index = static_cast<std::size_t>(n / 2);
  return index < list.size() ? list[index] : 0.0;
}

double CatStateCoefficients::amplitude_sum(int parity) const {
  const auto& list = parity == 0 ? even : odd;
  return std::accumulate(list.begin(), list.end(), 0.0);
}

double CatStateCoefficients::norm_squared() const {
  double sum = 0.0;
  for (double c : even) sum += c * c;
  for (double c : odd) sum += c * c;
  return sum;
}

CatStateCoefficients cat_coefficients(double alpha, double tail_tolerance) {
  if (!(alpha >= 0.0)) throw DomainError("cat-state amplitude must be non-negative");
  if (alpha > kMaxAlpha) throw UnsupportedAmplitudeError("cat-state amplitude above 10");
  if (!(tail_tolerance > 0.0 && tail_tolerance <= 1e-6)) {
    throw DomainError("tail tolerance must lie in (0, 1e-6]");
  }

  const double s = alpha * alpha;
  CatStateCoefficients cat;
  cat.alpha = alpha;

  // c_n^2 is a Poisson weight; iterate amplitudes and squared mass together.
  double amplitude = std::exp(-0.5 * s);
  std::vector<double> all{amplitude};
  int n = 0;
  for (;;) {
    const double next = amplitude * alpha / std::sqrt(static_cast<double>(n + 1));
    // Keep at least photon number 2 so the bounded yields always have weights.
    if (n >= 2 && poisson_tail_bound(next * next, s, n) < tail_tolerance) break;
    amplitude = next;
    all.push_back(amplitude);
    ++n;
  }
  cat.n_max = n;
  for (int k = 0; k <= n; ++k) {
    (k % 2 == 0 ? cat.even : cat.odd).push_back(all[static_cast<std::size_t>(k)]);
  }
  return cat;
}

double phase_error_upper_bound(double p_xx, const CatStateCoefficients& cat_a,
                               const CatStateCoefficients& cat_b, const YieldBounds& yields) {
  if (!(p_xx > 0.0)) throw NoKeyError("X-basis gain is zero; phase error undefined");

  double bound = 0.0;
  for (int parity = 0; parity < 2; ++parity) {
    double bounded = 0.0;
    double weight = 0.0;
    for (const PhotonPair pair : yields.pairs()) {
      const double c = cat_a.amplitude(parity, pair.n_a) * cat_b.amplitude(parity, pair.n_b);
      if (c == 0.0) continue;
      bounded += c * std::sqrt(yields.get(pair));
      weight += c;
    }
    const double total = cat_a.amplitude_sum(parity) * cat_b.amplitude_sum(parity);
    const double bracket = bounded + std::max(0.0, total - weight) * YieldBounds::kTailDefault;
    bound += bracket * bracket;
  }
  return std::min(1.0, bound / p_xx);
}

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("binary entropy argument must lie in [0, 1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double key_rate(double p_xx, double e_xx, double e_zz_upper, int pattern_count, double basis_weight,
                double ec_inefficiency) {
  if (!(p_xx >= 0.0 && p_xx <= 1.0)) throw DomainError("p_xx must lie in [0, 1]");
  if (pattern_count < 0) throw DomainError("pattern count must be non-negative");
  if (!(basis_weight >= 0.0 && basis_weight <= 1.0)) throw DomainError("basis weight must lie in [0, 1]");
  if (!(ec_inefficiency >= 1.0)) throw DomainError("error-correction inefficiency must be >= 1");
  const double h_bit = binary_entropy(std::min(e_xx, 0.5));
  const double h_phase = binary_entropy(std::min(e_zz_upper, 0.5));
  const double fraction = std::max(0.0, 1.0 - ec_inefficiency * h_bit - h_phase);
  return basis_weight * pattern_count * p_xx * fraction;
}

}  // namespace tfqkd
