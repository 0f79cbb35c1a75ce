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

#include "tfqkd/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "tfqkd/errors.hpp"

namespace tfqkd::lp {
namespace {

using Real = long double;

enum class Status { kBasic, kAtLower, kAtUpper };

// Column layout: [0, n) structural variables, [n, n + m) row activities
// r_i = a_i . x, [n + m, n + 2m) phase-one artificials. Row i of the
// equality system reads a_i . x - r_i + sign_i w_i = 0.
class Tableau {
 public:
  Tableau(const DenseLp& lp, std::vector<int> active_rows, const SimplexOptions& options)
      : n_(lp.num_vars),
        m_(static_cast<int>(active_rows.size())),
        cols_(n_ + 2 * m_),
        opt_(options),
        rows_(std::move(active_rows)),
        table_(static_cast<std::size_t>(m_) * cols_, 0.0L),
        lower_(cols_),
        upper_(cols_),
        value_(cols_),
        status_(cols_, Status::kAtLower),
        basis_(m_) {
    for (int j = 0; j < n_; ++j) {
      lower_[j] = lp.var_lower[j];
      upper_[j] = lp.var_upper[j];
      value_[j] = lower_[j];
    }
    for (int i = 0; i < m_; ++i) {
      const auto& row = lp.rows[static_cast<std::size_t>(rows_[i])];
      Real activity = 0;
      for (int j = 0; j < n_; ++j) activity += static_cast<Real>(row[j]) * value_[j];

      const int r = n_ + i;
      lower_[r] = lp.row_lower[rows_[i]];
      upper_[r] = lp.row_upper[rows_[i]];
      // Park the activity variable on the finite bound nearest the start.
      if (std::isinf(static_cast<double>(lower_[r])) ||
          (!std::isinf(static_cast<double>(upper_[r])) && activity >= upper_[r])) {
        value_[r] = upper_[r];
        status_[r] = Status::kAtUpper;
      } else {
        value_[r] = lower_[r];
        status_[r] = Status::kAtLower;
      }

      const Real residual = activity - value_[r];
      const Real sign = residual > 0 ? -1.0L : 1.0L;
      const int w = n_ + m_ + i;
      lower_[w] = 0;
      upper_[w] = static_cast<Real>(kInfinity);
      value_[w] = std::fabs(residual);
      status_[w] = Status::kBasic;
      basis_[i] = w;

      // Basis matrix is diag(sign); premultiplying by its inverse scales the
      // row by sign.
      for (int j = 0; j < n_; ++j) at(i, j) = sign * static_cast<Real>(row[j]);
      at(i, r) = -sign;
      at(i, w) = 1;
    }
  }

  LpSolution solve(const DenseLp& lp) {
    LpSolution out;
    std::vector<Real> cost(cols_, 0);
    for (int i = 0; i < m_; ++i) cost[n_ + m_ + i] = -1;
    LpStatus status = run(cost, out.iterations);
    if (status == LpStatus::kIterationLimit) {
      out.status = status;
      return out;
    }

    recompute_basics();
    Real infeasibility = 0;
    Real worst = -1;
    for (int i = 0; i < m_; ++i) {
      const int w = n_ + m_ + i;
      infeasibility += value_[w];
      if (value_[w] > worst) {
        worst = value_[w];
        out.violated_row = rows_[i];
      }
    }
    if (infeasibility > opt_.feasibility_tolerance) {
      out.status = LpStatus::kInfeasible;
      return out;
    }
    out.violated_row = -1;

    for (int i = 0; i < m_; ++i) {
      const int w = n_ + m_ + i;
      upper_[w] = 0;
      if (status_[w] != Status::kBasic) {
        value_[w] = 0;
        status_[w] = Status::kAtLower;
      }
    }
    std::fill(cost.begin(), cost.end(), 0.0L);
    for (int j = 0; j < n_; ++j) cost[j] = lp.objective[j];
    status = run(cost, out.iterations);
    out.status = status;
    if (status != LpStatus::kOptimal) return out;

    recompute_basics();
    out.x.resize(n_);
    Real objective = 0;
    for (int j = 0; j < n_; ++j) {
      out.x[j] = static_cast<double>(std::clamp(value_[j], lower_[j], upper_[j]));
      objective += static_cast<Real>(lp.objective[j]) * out.x[j];
    }
    out.objective = static_cast<double>(objective);
    return out;
  }

 private:
  Real& at(int i, int j) { return table_[static_cast<std::size_t>(i) * cols_ + j]; }
  Real at(int i, int j) const { return table_[static_cast<std::size_t>(i) * cols_ + j]; }

  // Basic values from the nonbasic ones: T z = 0 with T restricted to the
  // basis equal to the identity.
  void recompute_basics() {
    for (int i = 0; i < m_; ++i) {
      Real sum = 0;
      for (int j = 0; j < cols_; ++j) {
        if (status_[j] != Status::kBasic) sum += at(i, j) * value_[j];
      }
      value_[basis_[i]] = -sum;
    }
  }

  LpStatus run(const std::vector<Real>& cost, int& iterations) {
    std::vector<Real> reduced(cols_);
    for (;;) {
      if (iterations >= opt_.max_iterations) return LpStatus::kIterationLimit;

      for (int j = 0; j < cols_; ++j) {
        if (status_[j] == Status::kBasic) {
          reduced[j] = 0;
          continue;
        }
        Real d = cost[j];
        for (int i = 0; i < m_; ++i) d -= cost[basis_[i]] * at(i, j);
        reduced[j] = d;
      }

      int entering = -1;
      for (int j = 0; j < cols_; ++j) {
        if (status_[j] == Status::kBasic || upper_[j] <= lower_[j]) continue;
        if ((status_[j] == Status::kAtLower && reduced[j] > opt_.optimality_tolerance) ||
            (status_[j] == Status::kAtUpper && reduced[j] < -opt_.optimality_tolerance)) {
          entering = j;
          break;
        }
      }
      if (entering < 0) return LpStatus::kOptimal;
      ++iterations;

      const Real direction = status_[entering] == Status::kAtLower ? 1 : -1;
      const Real flip = upper_[entering] - lower_[entering];

      // Ratio test. Basic variable i moves by rate_i per unit step.
      Real best = static_cast<Real>(kInfinity);
      for (int i = 0; i < m_; ++i) {
        const Real alpha = at(i, entering);
        if (std::fabs(alpha) <= opt_.pivot_tolerance) continue;
        best = std::min(best, step_limit(i, -direction * alpha));
      }
      if (std::isinf(static_cast<double>(best)) && std::isinf(static_cast<double>(flip))) {
        return LpStatus::kUnbounded;
      }

      if (flip <= best) {
        for (int i = 0; i < m_; ++i) value_[basis_[i]] -= direction * at(i, entering) * flip;
        value_[entering] = status_[entering] == Status::kAtLower ? upper_[entering] : lower_[entering];
        status_[entering] = status_[entering] == Status::kAtLower ? Status::kAtUpper : Status::kAtLower;
        continue;
      }

      // Bland: among rows attaining the minimum ratio, the basic variable with
      // the smallest index leaves.
      const Real tie = best + 1e-12L * std::max<Real>(1, best);
      int leaving_row = -1;
      for (int i = 0; i < m_; ++i) {
        const Real alpha = at(i, entering);
        if (std::fabs(alpha) <= opt_.pivot_tolerance) continue;
        if (step_limit(i, -direction * alpha) <= tie &&
            (leaving_row < 0 || basis_[i] < basis_[leaving_row])) {
          leaving_row = i;
        }
      }

      const Real step = best;
      for (int i = 0; i < m_; ++i) value_[basis_[i]] -= direction * at(i, entering) * step;
      value_[entering] += direction * step;

      const int leaving = basis_[leaving_row];
      const Real leaving_rate = -direction * at(leaving_row, entering);
      if (leaving_rate < 0) {
        value_[leaving] = lower_[leaving];
        status_[leaving] = Status::kAtLower;
      } else {
        value_[leaving] = upper_[leaving];
        status_[leaving] = Status::kAtUpper;
      }
      pivot(leaving_row, entering);
    }
  }

  Real step_limit(int row, Real rate) const {
    const int b = basis_[row];
    Real limit;
    if (rate < 0) {
      limit = (value_[b] - lower_[b]) / -rate;
    } else {
      if (std::isinf(static_cast<double>(upper_[b]))) return static_cast<Real>(kInfinity);
      limit = (upper_[b] - value_[b]) / rate;
    }
    return std::max<Real>(0, limit);
  }

  void pivot(int row, int col) {
    const Real inv = 1 / at(row, col);
    for (int j = 0; j < cols_; ++j) at(row, j) *= inv;
    at(row, col) = 1;
    for (int i = 0; i < m_; ++i) {
      if (i == row) continue;
      const Real factor = at(i, col);
      if (factor == 0) continue;
      for (int j = 0; j < cols_; ++j) at(i, j) -= factor * at(row, j);
      at(i, col) = 0;
    }
    status_[basis_[row]] = status_[basis_[row]] == Status::kBasic ? Status::kAtLower : status_[basis_[row]];
    basis_[row] = col;
    status_[col] = Status::kBasic;
  }

  int n_;
  int m_;
  int cols_;
  SimplexOptions opt_;
  std::vector<int> rows_;
  std::vector<Real> table_;
  std::vector<Real> lower_, upper_, value_;
  std::vector<Status> status_;
  std::vector<int> basis_;
};

void check_dimensions(const DenseLp& lp) {
  const auto n = static_cast<std::size_t>(lp.num_vars);
  if (lp.num_vars < 0 || lp.objective.size() != n || lp.var_lower.size() != n || lp.var_upper.size() != n) {
    throw DomainError("LP variable arrays disagree with num_vars");
  }
  if (lp.row_lower.size() != lp.rows.size() || lp.row_upper.size() != lp.rows.size()) {
    throw DomainError("LP row bounds disagree with row count");
  }
  for (const auto& row : lp.rows) {
    if (row.size() != n) throw DomainError("LP row has the wrong length");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(lp.var_lower[j]) || !std::isfinite(lp.var_upper[j]) || lp.var_lower[j] > lp.var_upper[j]) {
      throw DomainError("LP variable bounds must be finite and ordered");
    }
  }
}

}  // namespace

LpSolution maximize(const DenseLp& problem, const SimplexOptions& options) {
  check_dimensions(problem);
  std::vector<int> active;
  for (std::size_t i = 0; i < problem.rows.size(); ++i) {
    if (problem.row_lower[i] > problem.row_upper[i]) {
      LpSolution out;
      out.status = LpStatus::kInfeasible;
      out.violated_row = static_cast<int>(i);
      return out;
    }
    // A row without finite bounds constrains nothing.
    if (std::isinf(problem.row_lower[i]) && std::isinf(problem.row_upper[i])) continue;
    active.push_back(static_cast<int>(i));
  }
  Tableau tableau(problem, std::move(active), options);
  return tableau.solve(problem);
}

}  // namespace tfqkd::lp
