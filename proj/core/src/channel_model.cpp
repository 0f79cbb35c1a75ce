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

#include "tfqkd/channel_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "tfqkd/bessel.hpp"
#include "tfqkd/errors.hpp"

namespace tfqkd {
namespace {

constexpr double kClampSlack = 1e-12;
constexpr int kMaxFactorial = 2 * kMaxYieldPhotonNumber;

using Real = long double;

struct CombinatoricsTable {
  std::array<Real, kMaxFactorial + 1> factorial{};
  std::array<std::array<Real, kMaxFactorial + 1>, kMaxFactorial + 1> binomial{};

  CombinatoricsTable() {
    factorial[0] = 1;
    for (int i = 1; i <= kMaxFactorial; ++i) factorial[i] = factorial[i - 1] * i;
    for (int n = 0; n <= kMaxFactorial; ++n) {
      binomial[n][0] = 1;
      for (int k = 1; k <= n; ++k) binomial[n][k] = binomial[n - 1][k - 1] + (k <= n - 1 ? binomial[n - 1][k] : 0);
    }
  }
};

const CombinatoricsTable& combinatorics() {
  static const CombinatoricsTable table;
  return table;
}

// base^exponent for a non-negative integer exponent, with 0^0 = 1.
Real ipow(Real base, int exponent) {
  Real result = 1;
  for (; exponent > 0; --exponent) result *= base;
  return result;
}

double clamp_probability(double value) {
  if (value < 0.0 && value > -kClampSlack) return 0.0;
  if (value > 1.0 && value < 1.0 + kClampSlack) return 1.0;
  return std::clamp(value, 0.0, 1.0);
}

void check_gamma(const ArrivingIntensities& gamma) {
  if (!(gamma.gamma_a >= 0.0) || !(gamma.gamma_b >= 0.0)) {
    throw DomainError("arriving intensities must be non-negative");
  }
}

void check_photon_number(int n) {
  if (n < 0) throw DomainError("photon number must be non-negative");
  if (n > kMaxYieldPhotonNumber) {
    throw UnsupportedPhotonNumberError("photon number " + std::to_string(n) + " exceeds cap " +
                                       std::to_string(kMaxYieldPhotonNumber));
  }
}

// Exponents a = S/2 - x and b = S/2 + x of the two interference terms, with
// S = gamma_a + gamma_b and x = sqrt(gamma_a gamma_b) cos(phi) cos(theta).
// `a` is assembled from non-negative pieces so that balanced inputs give an
// exact zero instead of a rounding residue.
struct InterferenceExponents {
  double a;
  double b;
  double total;
};

InterferenceExponents interference_exponents(const ChannelScenario& scenario,
                                             const ArrivingIntensities& gamma) {
  const double ra = std::sqrt(gamma.gamma_a);
  const double rb = std::sqrt(gamma.gamma_b);
  const double cos_theta = scenario.cos_total_misalignment();
  const double half_phi = std::sin(0.5 * scenario.phi);
  // 1 - cos(phi) cos(theta) = (1 - cos(theta)) + cos(theta) (1 - cos(phi))
  const double visibility_loss = 2.0 * scenario.e_d + cos_theta * 2.0 * half_phi * half_phi;
  const double diff = ra - rb;
  const double cross = ra * rb;
  const double total = gamma.gamma_a + gamma.gamma_b;
  const double x = cross * std::cos(scenario.phi) * cos_theta;
  return {0.5 * diff * diff + cross * visibility_loss, 0.5 * total + x, total};
}

// Probability that k photons from Alice and l from Bob, all reaching the
// beamsplitter, leave through one given output port. Alice's polarisation is
// rotated by +theta_a and Bob's by -theta_b.
//
// Expanding both amplitudes in the H/V basis and squaring yields a triple sum
// over the number m (p) of Alice's (Bob's) photons that are H in the first
// factor and q in the second; the two factors must agree on the H count m + p.
Real all_in_one_port(int k, int l, Real cos_a, Real sin_a, Real cos_b, Real sin_b) {
  const auto& comb = combinatorics();
  Real sum = 0;
  for (int m = 0; m <= k; ++m) {
    for (int p = 0; p <= l; ++p) {
      const int horizontal = m + p;
      const Real prefactor = comb.binomial[k][m] * comb.binomial[l][p] * comb.factorial[horizontal] *
                             comb.factorial[k + l - horizontal];
      const int q_lo = std::max(0, horizontal - l);
      const int q_hi = std::min(k, horizontal);
      for (int q = q_lo; q <= q_hi; ++q) {
        const Real term = comb.binomial[k][q] * comb.binomial[l][horizontal - q] *
                          ipow(cos_a, m + q) * ipow(cos_b, m + 2 * p - q) *
                          ipow(sin_a, 2 * k - m - q) * ipow(sin_b, 2 * l - m - 2 * p + q);
        sum += prefactor * term;
      }
    }
  }
  return sum / (std::ldexp(Real{1}, k + l) * comb.factorial[k] * comb.factorial[l]);
}

struct PortTable {
  int extent_a;
  int extent_b;
  std::vector<Real> values;
  Real at(int k, int l) const { return values[static_cast<std::size_t>(k * extent_b + l)]; }
};

PortTable port_table(const ChannelScenario& scenario, int max_a, int max_b) {
  const Real cos_a = std::cos(static_cast<Real>(scenario.theta_a()));
  const Real sin_a = std::sin(static_cast<Real>(scenario.theta_a()));
  const Real cos_b = std::cos(static_cast<Real>(scenario.theta_b()));
  const Real sin_b = -std::sin(static_cast<Real>(scenario.theta_b()));
  PortTable table{max_a + 1, max_b + 1, {}};
  table.values.resize(static_cast<std::size_t>(table.extent_a * table.extent_b));
  for (int k = 0; k <= max_a; ++k) {
    for (int l = 0; l <= max_b; ++l) {
      table.values[static_cast<std::size_t>(k * table.extent_b + l)] =
          all_in_one_port(k, l, cos_a, sin_a, cos_b, sin_b);
    }
  }
  return table;
}

// Average over binomial photon loss in each channel, minus the all-lost event
// (which cannot click without dark counts).
double yield_from_ports(const PortTable& ports, const ChannelScenario& scenario, int n_a, int n_b) {
  const auto& comb = combinatorics();
  const Real eta_a = scenario.eta_a;
  const Real eta_b = scenario.eta_b;
  Real sum = 0;
  for (int k = 0; k <= n_a; ++k) {
    const Real weight_a = comb.binomial[n_a][k] * ipow(eta_a, k) * ipow(1 - eta_a, n_a - k);
    for (int l = 0; l <= n_b; ++l) {
      const Real weight_b = comb.binomial[n_b][l] * ipow(eta_b, l) * ipow(1 - eta_b, n_b - l);
      sum += weight_a * weight_b * ports.at(k, l);
    }
  }
  sum -= ipow(1 - eta_a, n_a) * ipow(1 - eta_b, n_b);
  return clamp_probability(static_cast<double>(sum));
}

}  // namespace

double db_to_transmittance(double loss_db) { return std::pow(10.0, -loss_db / 10.0); }

double transmittance_to_db(double eta) {
  if (!(eta > 0.0)) throw DomainError("transmittance must be positive");
  return -10.0 * std::log10(eta);
}

void ChannelScenario::validate() const {
  if (!(eta_a > 0.0 && eta_a <= 1.0)) throw DomainError("eta_a must lie in (0, 1]");
  if (!(eta_b > 0.0 && eta_b <= 1.0)) throw DomainError("eta_b must lie in (0, 1]");
  if (!(p_d >= 0.0 && p_d < 1.0)) throw DomainError("p_d must lie in [0, 1)");
  if (!(e_d >= 0.0 && e_d < 1.0)) throw DomainError("e_d must lie in [0, 1)");
  if (!std::isfinite(phi)) throw DomainError("phi must be finite");
}

double ChannelScenario::theta_a() const { return std::asin(std::sqrt(e_d)); }
double ChannelScenario::theta_b() const { return std::asin(std::sqrt(e_d)); }
double ChannelScenario::total_misalignment() const { return theta_a() + theta_b(); }
double ChannelScenario::cos_total_misalignment() const { return 1.0 - 2.0 * e_d; }

double arriving_intensity(double source_intensity, double eta) {
  if (!(source_intensity >= 0.0)) throw DomainError("source intensity must be non-negative");
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("transmittance must lie in [0, 1]");
  return source_intensity * eta;
}

ArrivingIntensities arriving_intensities(const ChannelScenario& scenario, double s_a, double s_b) {
  return {arriving_intensity(s_a, scenario.eta_a), arriving_intensity(s_b, scenario.eta_b)};
}

double x_basis_gain(const ChannelScenario& scenario, const ArrivingIntensities& gamma) {
  check_gamma(gamma);
  const auto e = interference_exponents(scenario, gamma);
  const double p_d = scenario.p_d;
  const double gain =
      0.5 * (1.0 - p_d) * std::exp(-e.total) * (std::expm1(e.a) + std::expm1(e.b) + 2.0 * p_d);
  return clamp_probability(gain);
}

double x_basis_qber(const ChannelScenario& scenario, const ArrivingIntensities& gamma) {
  check_gamma(gamma);
  const auto e = interference_exponents(scenario, gamma);
  const double p_d = scenario.p_d;
  const double wrong = std::expm1(e.a) + p_d;
  const double all = wrong + std::expm1(e.b) + p_d;
  if (!(all > 0.0) || p_d == 1.0) {
    throw UndefinedQberError("X-basis QBER is undefined for zero gain");
  }
  return clamp_probability(wrong / all);
}

double z_basis_gain(const ChannelScenario& scenario, const ArrivingIntensities& gamma) {
  check_gamma(gamma);
  const double total = gamma.gamma_a + gamma.gamma_b;
  const double y = std::sqrt(gamma.gamma_a * gamma.gamma_b) * scenario.cos_total_misalignment();
  // exp(S/2) I0(y) - 1, split so that small intensities keep full precision.
  const double excess = std::expm1(0.5 * total) + std::exp(0.5 * total) * bessel_i0m1(y);
  const double p_d = scenario.p_d;
  return clamp_probability((1.0 - p_d) * std::exp(-total) * (excess + p_d));
}

double yield_nm_asymptotic(const ChannelScenario& scenario, int n_a, int n_b) {
  check_photon_number(n_a);
  check_photon_number(n_b);
  const PortTable ports = port_table(scenario, n_a, n_b);
  return yield_from_ports(ports, scenario, n_a, n_b);
}

YieldBounds asymptotic_yield_table(const ChannelScenario& scenario, int max_photons) {
  check_photon_number(max_photons);
  const PortTable ports = port_table(scenario, max_photons, max_photons);
  YieldBounds table;
  for (int n_a = 0; n_a <= max_photons; ++n_a) {
    for (int n_b = 0; n_b <= max_photons; ++n_b) {
      table.set({n_a, n_b}, yield_from_ports(ports, scenario, n_a, n_b));
    }
  }
  return table;
}

FirstOrderDiagnostics first_order_diagnostics(const ChannelScenario& scenario,
                                              const ArrivingIntensities& gamma) {
  check_gamma(gamma);
  const double total = gamma.gamma_a + gamma.gamma_b;
  FirstOrderDiagnostics out;
  out.p_xx_approx = 0.5 * total;
  out.p_zz_approx = 0.5 * total;
  if (total > 0.0) {
    const double cross = std::sqrt(gamma.gamma_a * gamma.gamma_b) * scenario.cos_total_misalignment();
    out.e_xx_approx = (0.5 * total - cross) / total;
  } else {
    out.e_xx_approx = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

}  // namespace tfqkd
