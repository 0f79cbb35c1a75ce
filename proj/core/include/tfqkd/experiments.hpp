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


// Loss sweeps comparing the operating strategies, and the QBER / phase-error
// scan against intensity asymmetry, with their JSON configuration and CSV
// output.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tfqkd/channel_model.hpp"
#include "tfqkd/optimizer.hpp"

namespace tfqkd {

struct SweepConfig {
  std::vector<double> total_loss_db_grid;
  double mismatch_ratio = 1.0;  ///< x = eta_a / eta_b, (0, 1]
  double p_d = 1e-8;
  double e_d = 0.02;
  double phi = 0.0;
  EvaluationMode mode;
  std::vector<Strategy> strategies{std::begin(kAllStrategies), std::end(kAllStrategies)};
  int n_starts = 4;
  std::uint64_t seed = 1;
  /// Canonical (key-sorted, whitespace-free) form of the source document.
  std::string canonical_json;

  /// Parses and validates a JSON document. Throws ConfigError naming the
  /// offending field, including for unknown fields.
  static SweepConfig parse(const std::string& json_text);
};

struct QberScanConfig {
  std::vector<double> ratio_grid;  ///< s_a / s_b and mu_a / mu_b
  double s_b = 0.1;
  double mu_b = 0.1;
  double nu = 0.01;
  double eta_a = 1.0;
  double eta_b = 1.0;
  double p_d = 0.0;
  double e_d = 0.02;
  double phi = 0.0;
  std::string canonical_json;

  static QberScanConfig parse(const std::string& json_text);
};

/// Transmittances for total loss `loss_db` and mismatch x: eta_b =
/// min(1, 10^(-L/20) / sqrt x), eta_a = 10^(-L/10) / eta_b.
std::pair<double, double> split_loss(double loss_db, double mismatch_ratio);

struct SweepRow {
  double loss_db = 0.0;
  ChannelScenario scenario;  ///< before any add-fibre padding
  OptimizationResult result;
};

/// One row per (loss, strategy) in grid-then-strategy order. Points run on
/// `workers` threads; the output order never depends on scheduling.
std::vector<SweepRow> run_sweep(const SweepConfig& config, int workers = 1);

struct QberScanRow {
  double ratio = 0.0;
  double s_a = 0.0;
  double mu_a = 0.0;
  double e_xx_full = 0.0;
  double e_xx_first_order = 0.0;
  double e_zz_upper = 0.0;           ///< three-decoy LP bound, s_a = s_b
  double u_11 = 0.0;                 ///< LP upper bound on Y_11
  double e_zz_infinite_decoy = 0.0;  ///< same bound with exact yields
};

/// X-basis QBER against s_a / s_b, and the decoy-LP phase-error bound against
/// mu_a / mu_b with both signals at s_b.
std::vector<QberScanRow> run_qber_scan(const QberScanConfig& config);

/// 64-bit FNV-1a of a byte string.
std::uint64_t fnv1a64(const std::string& bytes);

void write_sweep_csv(std::ostream& out, const SweepConfig& config, const std::vector<SweepRow>& rows);
void write_qber_scan_csv(std::ostream& out, const QberScanConfig& config, const std::vector<QberScanRow>& rows);

/// Text listing of the decoy LP behind each finite-mode row.
std::string dump_sweep_lps(const SweepConfig& config, const std::vector<SweepRow>& rows);

}  // namespace tfqkd
