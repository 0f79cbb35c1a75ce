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

#pragma once

#include <vector>

#include "tfqkd/yields.hpp"

namespace tfqkd {

/// Fock amplitudes of the even and odd cat states obtained when a sender's
/// X-basis state |alpha> / |-alpha> is projected onto a Z eigenstate:
/// c_n = exp(-alpha^2/2) alpha^n / sqrt(n!), kept for even n in `even` and
/// odd n in `odd`. The squared amplitudes of both lists sum to one.
struct CatStateCoefficients {
  double alpha = 0.0;
  int n_max = 0;             ///< largest photon number kept
  std::vector<double> even;  ///< c_0, c_2, c_4, ...
  std::vector<double> odd;   ///< c_1, c_3, c_5, ...

  /// c_n^{(parity)}; zero when n has the other parity or exceeds n_max.
  double amplitude(int parity, int n) const;

  /// Sum of the kept amplitudes of one parity.
  double amplitude_sum(int parity) const;

  /// Sum of the kept squared amplitudes of both parities.
  double norm_squared() const;
};

/// Truncates the expansion once the omitted squared mass is below
/// tail_tolerance. Throws DomainError for alpha < 0 or a tolerance outside
/// (0, 1e-6], UnsupportedAmplitudeError for alpha > 10.
CatStateCoefficients cat_coefficients(double alpha, double tail_tolerance = 1e-15);

/// Upper bound on the phase-error rate of one detection pattern:
///
///   p_xx e_zz <= sum_{i=0,1} [ sum_{n,m} c_n^{A,(i)} c_m^{B,(i)} sqrt(Y_nm) ]^2
///
/// Yields absent from `yields` take the trivial bound 1, which collapses their
/// part of each bracket into T_i - (kept terms), with T_i the product of the
/// two parity-i amplitude sums. Returns min(1, bound / p_xx). Throws NoKeyError
/// for p_xx <= 0.
double phase_error_upper_bound(double p_xx, const CatStateCoefficients& cat_a,
                               const CatStateCoefficients& cat_b, const YieldBounds& yields);

/// h2(x) = -x log2 x - (1-x) log2(1-x), with h2(0) = h2(1) = 0. Throws
/// DomainError outside [0, 1].
double binary_entropy(double x);

/// Secure key rate in bits per pulse:
///
///   basis_weight * pattern_count * p_xx * max(0, 1 - f h2(e_xx) - h2(e_zz))
///
/// Error rates enter the entropy clipped to 1/2: an upper bound at or above
/// one half carries no information and must not produce key.
/// `ec_inefficiency` is the error-correction factor f (1 = Shannon limit).
double key_rate(double p_xx, double e_xx, double e_zz_upper, int pattern_count = 2,
                double basis_weight = 1.0, double ec_inefficiency = 1.0);

}  // namespace tfqkd
