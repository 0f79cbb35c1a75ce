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

namespace tfqkd {

// Modified Bessel function of the first kind, order zero, by its power
// series sum_k (x/2)^{2k} / (k!)^2. Terms are added until one drops below
// 1e-16 of the running sum. Even in x.
double bessel_i0(double x);

// I0(x) - 1 without the cancellation of subtracting one from a number
// close to one. Used where the small-argument excess is what matters.
double bessel_i0m1(double x);

}  // namespace tfqkd
