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


#include <gtest/gtest.h>

#include <cmath>
#include <tuple>

#include "oracles/bessel_integral.hpp"
#include "oracles/photon_paths.hpp"
#include "oracles/reference_rate.hpp"
#include "oracles/reference_values.hpp"
#include "tfqkd/bessel.hpp"
#include "tfqkd/channel_model.hpp"
#include "tfqkd/errors.hpp"

namespace tfqkd {
namespace {

ChannelScenario ideal(double e_d = 0.0) { return {1.0, 1.0, 0.0, e_d, 0.0}; }

double poisson(double mu, int n) { return std::exp(-mu + n * std::log(mu) - std::lgamma(n + 1.0)); }

TEST(Transmittance, DecibelConversion) {
  EXPECT_DOUBLE_EQ(db_to_transmittance(0), 1.0);
  EXPECT_DOUBLE_EQ(db_to_transmittance(10), 0.1);
  EXPECT_DOUBLE_EQ(db_to_transmittance(20), 0.01);
  for (double db : {10.0, 20.0, 30.0, 40.0, 50.0}) EXPECT_DOUBLE_EQ(transmittance_to_db(db_to_transmittance(db)), db);
}

TEST(ArrivingIntensity, ProductOfSourceAndChannel) {
  EXPECT_DOUBLE_EQ(arriving_intensity(0.1, 0.1), 0.01);
  EXPECT_EQ(arriving_intensity(0.0, 0.5), 0.0);
  EXPECT_NEAR(arriving_intensity(0.2, db_to_transmittance(20)), 0.002, 1e-18);
  EXPECT_THROW(arriving_intensity(-0.1, 0.5), DomainError);
  EXPECT_THROW(arriving_intensity(0.1, 1.5), DomainError);
}

TEST(Scenario, ValidationAndAngles) {
  EXPECT_THROW((ChannelScenario{0.0, 1.0, 0, 0, 0}.validate()), DomainError);
  EXPECT_THROW((ChannelScenario{1.0, 1.1, 0, 0, 0}.validate()), DomainError);
  EXPECT_THROW((ChannelScenario{1.0, 1.0, 1.0, 0, 0}.validate()), DomainError);
  EXPECT_THROW((ChannelScenario{1.0, 1.0, 0, -0.1, 0}.validate()), DomainError);
  const ChannelScenario s = ideal(0.02);
  EXPECT_NEAR(s.theta_a(), std::asin(std::sqrt(0.02)), 1e-15);
  EXPECT_NEAR(s.total_misalignment(), 2 * std::asin(std::sqrt(0.02)), 1e-15);
  EXPECT_NEAR(s.cos_total_misalignment(), std::cos(s.total_misalignment()), 1e-15);
  EXPECT_NEAR(s.cos_total_misalignment(), 0.96, 1e-15);
}

TEST(DetectionPattern, OnlySingleClicksSucceed) {
  EXPECT_TRUE((DetectionPattern{0, 1}.successful()));
  EXPECT_TRUE((DetectionPattern{1, 0}.successful()));
  EXPECT_FALSE((DetectionPattern{0, 0}.successful()));
  EXPECT_FALSE((DetectionPattern{1, 1}.successful()));
}

TEST(XBasisGain, DarkAndVacuumLimits) {
  EXPECT_EQ(x_basis_gain(ideal(), {0, 0}), 0.0);
  ChannelScenario s = ideal();
  s.p_d = 1e-3;
  EXPECT_NEAR(x_basis_gain(s, {0, 0}), 1e-3 * (1 - 1e-3), 1e-18);
}

TEST(XBasisGain, SmallIntensitiesAverage) {
  for (auto [ga, gb] : {std::pair{1e-3, 2e-3}, std::pair{1e-4, 1e-3}, std::pair{5e-4, 5e-4}}) {
    const double g = x_basis_gain(ideal(), {ga, gb});
    EXPECT_NEAR(g, 0.5 * (ga + gb), 2 * (ga + gb) * (ga + gb));
  }
}

TEST(XBasisGain, MatchesDirectFormula) {
  for (double pd : {0.0, 1e-8, 1e-3}) {
    ChannelScenario s{0.3, 0.05, pd, 0.02, 0.1};
    for (auto [ga, gb] : {std::pair{0.2, 0.01}, std::pair{0.05, 0.05}, std::pair{1.0, 0.3}}) {
      const double expect = oracle::x_gain(ga, gb, pd, 0.96, std::cos(0.1));
      EXPECT_NEAR(x_basis_gain(s, {ga, gb}), expect, 1e-14 + 1e-12 * expect);
      EXPECT_NEAR(x_basis_qber(s, {ga, gb}), oracle::x_qber(ga, gb, pd, 0.96, std::cos(0.1)), 1e-11);
    }
  }
}

TEST(XBasisQber, PerfectInterferenceHasNoErrors) {
  for (double g : {1e-4, 0.01, 0.3, 2.0}) EXPECT_NEAR(x_basis_qber(ideal(), {g, g}), 0.0, 1e-15);
}

TEST(XBasisQber, MisalignmentFloor) {
  const double e = x_basis_qber(ideal(0.02), {0.01, 0.01});
  EXPECT_NEAR(e, 0.02, 0.002);
  EXPECT_NEAR(first_order_diagnostics(ideal(0.02), {0.01, 0.01}).e_xx_approx, 0.02, 1e-12);
}

TEST(XBasisQber, TenfoldAsymmetryFirstOrder) {
  const double expect = (0.5 * 11 - std::sqrt(10.0) * 0.96) / 11;
  EXPECT_NEAR(expect, 0.224, 5e-4);
  EXPECT_NEAR(first_order_diagnostics(ideal(0.02), {1e-3, 1e-4}).e_xx_approx, expect, 1e-12);
  EXPECT_NEAR(first_order_diagnostics(ideal(0.02), {0.1, 0.01}).e_xx_approx, expect, 1e-12);
}

TEST(XBasisQber, ZeroGainIsUndefined) {
  EXPECT_THROW(x_basis_qber(ideal(), {0, 0}), UndefinedQberError);
}

TEST(XBasisQber, MinimisedAtBalance) {
  const ChannelScenario s = ideal(0.02);
  const double gb = 0.01;
  const double at_balance = x_basis_qber(s, {gb, gb});
  for (double r : {0.1, 0.3, 0.7, 0.9, 0.99, 1.01, 1.1, 2.0, 5.0, 10.0}) {
    EXPECT_GT(x_basis_qber(s, {r * gb, gb}), at_balance) << r;
  }
}

TEST(ZBasisGain, DarkCountsOnly) {
  ChannelScenario s = ideal();
  s.p_d = 1e-4;
  EXPECT_NEAR(z_basis_gain(s, {0, 0}), 1e-4 * (1 - 1e-4), 1e-18);
}

TEST(ZBasisGain, HighPrecisionReference) {
  EXPECT_NEAR(z_basis_gain(ideal(), {0.05, 0.05}), reference::kZGainSymmetric005, 1e-15);
  EXPECT_NEAR(z_basis_gain(ideal(), {0.05, 0.05}), 0.046987, 5e-7);
  ChannelScenario s = ideal(0.02);
  s.p_d = 1e-6;
  EXPECT_NEAR(z_basis_gain(s, {0.02, 0.3}), reference::kZGainAsymmetric, 1e-15);
}

TEST(ZBasisGain, SmallIntensitiesAverage) {
  const double g = z_basis_gain(ideal(0.02), {2e-4, 7e-4});
  EXPECT_NEAR(g, 0.5 * 9e-4, 1e-6);
}

TEST(Bessel, AgreesWithIntegral) {
  for (double x = 0.0; x <= 5.0; x += 0.125) {
    const double ref = oracle::bessel_i0_integral(x);
    EXPECT_NEAR(bessel_i0(x), ref, 1e-12 * ref) << x;
    EXPECT_NEAR(bessel_i0m1(x), ref - 1.0, 1e-12 * ref) << x;
  }
  EXPECT_EQ(bessel_i0(0.0), 1.0);
  EXPECT_EQ(bessel_i0(-1.3), bessel_i0(1.3));
  // The excess keeps full relative precision where I0 - 1 would not.
  EXPECT_NEAR(bessel_i0m1(1e-5), 0.25e-10 + 1e-20 / 64, 1e-26);
}

TEST(FockYield, VacuumNeverClicks) {
  EXPECT_EQ(yield_nm_asymptotic({0.3, 0.7, 0, 0.02, 0}, 0, 0), 0.0);
}

TEST(FockYield, SinglePhotonHalf) {
  for (double eta : {1.0, 0.5, 0.01}) {
    for (double e_d : {0.0, 0.02, 0.3}) {
      EXPECT_NEAR(yield_nm_asymptotic({eta, 0.2, 0, e_d, 0}, 1, 0), eta / 2, 1e-15);
      EXPECT_NEAR(oracle::fock_yield(1, 0, eta, 0.2, std::asin(std::sqrt(e_d)), std::asin(std::sqrt(e_d))), eta / 2,
                  1e-15);
    }
  }
}

TEST(FockYield, HongOuMandel) {
  EXPECT_NEAR(yield_nm_asymptotic(ideal(), 1, 1), 0.5, 1e-15);
  EXPECT_NEAR(oracle::fock_yield(1, 1, 1, 1, 0, 0), 0.5, 1e-15);
}

TEST(FockYield, CapEnforced) {
  EXPECT_NO_THROW(yield_nm_asymptotic(ideal(), kMaxYieldPhotonNumber, 0));
  EXPECT_THROW(yield_nm_asymptotic(ideal(), kMaxYieldPhotonNumber + 1, 0), UnsupportedPhotonNumberError);
  EXPECT_THROW(yield_nm_asymptotic(ideal(), 0, -1), DomainError);
}

class FockYieldOracle : public ::testing::TestWithParam<std::tuple<double, double, double>> {};

TEST_P(FockYieldOracle, MatchesPhotonPathEnumeration) {
  const auto [eta_a, eta_b, e_d] = GetParam();
  const ChannelScenario s{eta_a, eta_b, 0.0, e_d, 0.0};
  const double t = s.theta_a();
  const YieldBounds table = asymptotic_yield_table(s, 4);
  for (int n_a = 0; n_a <= 4; ++n_a) {
    for (int n_b = 0; n_a + n_b <= 4; ++n_b) {
      const double expect = oracle::fock_yield(n_a, n_b, eta_a, eta_b, t, t);
      EXPECT_NEAR(yield_nm_asymptotic(s, n_a, n_b), expect, 1e-10) << n_a << "," << n_b;
      EXPECT_NEAR(table.get({n_a, n_b}), expect, 1e-10) << n_a << "," << n_b;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Grid, FockYieldOracle,
                         ::testing::Combine(::testing::Values(1.0, 0.7, 0.1, 0.003),
                                            ::testing::Values(1.0, 0.4, 0.02),
                                            ::testing::Values(0.0, 0.02, 0.15, 0.5)));

TEST(FockYield, PoissonMixtureReproducesZGain) {
  // Phase-randomised coherent pulses are Poisson mixtures of Fock states.
  for (auto [eta_a, eta_b, mu_a, mu_b] :
       {std::tuple{0.3, 0.05, 0.4, 0.2}, std::tuple{1.0, 1.0, 0.1, 0.01}, std::tuple{0.01, 0.1, 0.5, 0.05}}) {
    const ChannelScenario s{eta_a, eta_b, 0.0, 0.02, 0.0};
    const YieldBounds table = asymptotic_yield_table(s, 20);
    double mix = 0.0;
    for (int n = 0; n <= 20; ++n) {
      for (int m = 0; m <= 20; ++m) mix += poisson(mu_a, n) * poisson(mu_b, m) * table.get({n, m});
    }
    EXPECT_NEAR(mix, z_basis_gain(s, arriving_intensities(s, mu_a, mu_b)), 1e-12);
  }
}

TEST(Properties, SwapSymmetry) {
  for (double e_d : {0.0, 0.02, 0.1}) {
    const ChannelScenario s{0.3, 0.07, 1e-6, e_d, 0.2};
    ChannelScenario swapped = s;
    std::swap(swapped.eta_a, swapped.eta_b);
    const ArrivingIntensities g{0.013, 0.21};
    const ArrivingIntensities gs{0.21, 0.013};
    EXPECT_NEAR(x_basis_gain(s, g), x_basis_gain(s, gs), 1e-16);
    EXPECT_NEAR(x_basis_qber(s, g), x_basis_qber(s, gs), 1e-15);
    EXPECT_NEAR(z_basis_gain(s, g), z_basis_gain(s, gs), 1e-16);
    for (int n = 0; n <= 6; ++n) {
      for (int m = 0; m <= 6; ++m) {
        EXPECT_NEAR(yield_nm_asymptotic(s, n, m), yield_nm_asymptotic(swapped, m, n), 1e-13) << n << "," << m;
      }
    }
  }
}

TEST(Properties, OutputsAreProbabilities) {
  for (double eta : {1.0, 0.1, 1e-5}) {
    for (double pd : {0.0, 1e-8, 0.1}) {
      for (double e_d : {0.0, 0.02, 0.4}) {
        const ChannelScenario s{eta, 0.5, pd, e_d, 0.3};
        for (double ga : {0.0, 1e-6, 0.1, 3.0}) {
          for (double gb : {0.0, 1e-3, 0.7}) {
            const double px = x_basis_gain(s, {ga, gb});
            const double pz = z_basis_gain(s, {ga, gb});
            EXPECT_GE(px, 0.0);
            EXPECT_LE(px, 1.0);
            EXPECT_GE(pz, 0.0);
            EXPECT_LE(pz, 1.0);
            if (px > 0) {
              const double e = x_basis_qber(s, {ga, gb});
              EXPECT_GE(e, 0.0);
              EXPECT_LE(e, 1.0);
            }
          }
        }
        for (int n = 0; n <= 8; n += 2) {
          const double y = yield_nm_asymptotic(s, n, 8 - n);
          EXPECT_GE(y, 0.0);
          EXPECT_LE(y, 1.0);
        }
      }
    }
  }
}

TEST(Properties, FirstOrderConsistency) {
  const ChannelScenario s = ideal(0.02);
  for (auto [ga, gb] : {std::pair{1e-3, 1e-3}, std::pair{1e-3, 1e-4}, std::pair{2e-4, 9e-4}, std::pair{1e-5, 1e-3}}) {
    const auto approx = first_order_diagnostics(s, {ga, gb});
    const double px = x_basis_gain(s, {ga, gb});
    const double pz = z_basis_gain(s, {ga, gb});
    const double ex = x_basis_qber(s, {ga, gb});
    EXPECT_LE(std::fabs(px - approx.p_xx_approx) / px, 0.05);
    EXPECT_LE(std::fabs(pz - approx.p_zz_approx) / pz, 0.05);
    EXPECT_LE(std::fabs(ex - approx.e_xx_approx) / ex, 0.05);
  }
  EXPECT_TRUE(std::isnan(first_order_diagnostics(s, {0, 0}).e_xx_approx));
  EXPECT_EQ(first_order_diagnostics(ideal(), {0.3, 0.3}).e_xx_approx, 0.0);
}

}  // namespace
}  // namespace tfqkd
