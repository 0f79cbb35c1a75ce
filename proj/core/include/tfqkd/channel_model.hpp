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

// Simulated observables of an asymmetric twin-field QKD link: Alice and Bob
// send weak coherent pulses through channels of transmittance eta_a, eta_b to
// an untrusted relay that interferes them on a 50:50 beamsplitter and reports
// which of its two threshold detectors (C, D) clicked.
//
// Every gain below is for a single successful detection pattern, (k_c, k_d) =
// (0, 1) or (1, 0). Both patterns have identical statistics; callers that
// want the total multiply by two.

#pragma once

#include "tfqkd/yields.hpp"

namespace tfqkd {

/// Largest photon number accepted by the Fock-state yield formula.
inline constexpr int kMaxYieldPhotonNumber = 20;

/// Loss in dB to transmittance, eta = 10^(-dB/10).
double db_to_transmittance(double loss_db);
/// Transmittance to loss in dB.
double transmittance_to_db(double eta);

/// Physical channel seen by the relay. Detector efficiency is folded into the
/// transmittances.
struct ChannelScenario {
  double eta_a = 1.0;  ///< Alice -> relay transmittance, (0, 1]
  double eta_b = 1.0;  ///< Bob -> relay transmittance, (0, 1]
  double p_d = 0.0;    ///< dark-count probability per detector per pulse, [0, 1)
  double e_d = 0.0;    ///< misalignment error of each arm, [0, 1)
  double phi = 0.0;    ///< Alice-Bob phase mismatch, radians

  /// Throws DomainError when a field is out of range.
  void validate() const;

  /// Misalignment angle of one arm, arcsin(sqrt(e_d)). Alice's and Bob's
  /// polarisations are rotated in opposite directions by this amount.
  double theta_a() const;
  double theta_b() const;
  /// Total misalignment theta_a + theta_b = 2 arcsin(sqrt(e_d)).
  double total_misalignment() const;
  /// cos(total misalignment) = 1 - 2 e_d, evaluated without the arcsin.
  double cos_total_misalignment() const;
};

/// Mean photon numbers reaching the relay from each sender.
struct ArrivingIntensities {
  double gamma_a = 0.0;
  double gamma_b = 0.0;
};

/// A relay outcome; k = 1 means the detector clicked.
struct DetectionPattern {
  int k_c = 0;
  int k_d = 0;

  /// Exactly one detector clicked.
  bool successful() const { return k_c + k_d == 1 && (k_c == 0 || k_c == 1); }
};

/// Source intensity times transmittance. Throws DomainError on negative input
/// or eta > 1.
double arriving_intensity(double source_intensity, double eta);

/// Arriving intensities for a pair of source intensities.
ArrivingIntensities arriving_intensities(const ChannelScenario& scenario, double s_a, double s_b);

/// X-basis gain for one successful pattern. Symmetric in gamma_a, gamma_b.
double x_basis_gain(const ChannelScenario& scenario, const ArrivingIntensities& gamma);

/// X-basis bit-error rate. Throws UndefinedQberError when the gain is zero.
double x_basis_qber(const ChannelScenario& scenario, const ArrivingIntensities& gamma);

/// Z-basis gain of phase-randomised pulses for one successful pattern.
double z_basis_gain(const ChannelScenario& scenario, const ArrivingIntensities& gamma);

/// Infinite-decoy yield p(k_c, k_d | n_a, n_b) of Fock states, dark counts
/// excluded. Throws UnsupportedPhotonNumberError above kMaxYieldPhotonNumber.
double yield_nm_asymptotic(const ChannelScenario& scenario, int n_a, int n_b);

/// All yields with n_a, n_b <= max_photons, sharing intermediate sums.
YieldBounds asymptotic_yield_table(const ChannelScenario& scenario, int max_photons);

/// Low-order expansions of the observables, valid for small arriving
/// intensities, no dark counts and no phase mismatch.
struct FirstOrderDiagnostics {
  double p_xx_approx = 0.0;
  double p_zz_approx = 0.0;
  double e_xx_approx = 0.0;  ///< NaN when both intensities are zero
};

FirstOrderDiagnostics first_order_diagnostics(const ChannelScenario& scenario,
                                              const ArrivingIntensities& gamma);

}  // namespace tfqkd
