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

// Small dense linear programs with ranged rows and boxed variables,
//
//   maximize    c . x
//   subject to  row_lower_i <= a_i . x <= row_upper_i
//               var_lower_j <= x_j <= var_upper_j
//
// solved by a two-phase bounded-variable primal simplex on an explicit
// tableau. Entering and leaving variables follow Bland's smallest-index rule,
// so the pivot sequence (and therefore the result) is a pure function of the
// input and cannot cycle.

#pragma once

#include <limits>
#include <vector>

namespace tfqkd::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct DenseLp {
  int num_vars = 0;
  std::vector<double> objective;              ///< length num_vars
  std::vector<std::vector<double>> rows;      ///< each length num_vars
  std::vector<double> row_lower, row_upper;   ///< may be -inf / +inf
  std::vector<double> var_lower, var_upper;   ///< must be finite
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;
  std::vector<double> x;
  /// Row carrying the largest residual infeasibility when status is
  /// kInfeasible, otherwise -1.
  int violated_row = -1;
  int iterations = 0;
};

struct SimplexOptions {
  double feasibility_tolerance = 1e-11;
  double optimality_tolerance = 1e-13;
  double pivot_tolerance = 1e-12;
  int max_iterations = 50000;
};

/// Throws DomainError on inconsistent dimensions or non-finite variable
/// bounds.
LpSolution maximize(const DenseLp& problem, const SimplexOptions& options = {});

}  // namespace tfqkd::lp
