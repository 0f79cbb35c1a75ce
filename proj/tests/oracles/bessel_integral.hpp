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


// I0 from its integral representation (1/pi) int_0^pi exp(x cos t) dt. The
// integrand is smooth and periodic, so the trapezoidal rule converges
// geometrically.

#pragma once

#include <cmath>
#include <numbers>

namespace tfqkd::oracle {

inline double bessel_i0_integral(double x, int panels = 400) {
  const double h = std::numbers::pi / panels;
  long double sum = 0.5L * (std::exp(x) + std::exp(-x));
  for (int k = 1; k < panels; ++k) sum += std::exp(x * std::cos(k * h));
  return static_cast<double>(sum * h / std::numbers::pi);
}

}  // namespace tfqkd::oracle
