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

#include "tfqkd/bessel.hpp"

#include <cmath>
#include <limits>

namespace tfqkd {
namespace {

constexpr double kRelativeCutoff = 1e-16;

// Sum of the series starting at k = 1; the k = 0 term is exactly one. The
// cutoff is relative to the excess itself, which is stricter than relative
// to I0.
double series_excess(double x) {
  const double q = 0.25 * x * x;
  if (q == 0.0) return 0.0;
  double term = q;  // k = 1
  double sum = 0.0;
  for (int k = 1; k < 100000; ++k) {
    sum += term;
    if (term < kRelativeCutoff * sum) break;
    term *= q / (static_cast<double>(k + 1) * static_cast<double>(k + 1));
    if (!std::isfinite(term)) return std::numeric_limits<double>::infinity();
  }
  return sum;
}

}  // namespace

double bessel_i0(double x) { return 1.0 + series_excess(std::fabs(x)); }

double bessel_i0m1(double x) { return series_excess(std::fabs(x)); }

}  // namespace tfqkd
