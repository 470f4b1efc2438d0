// Characteristic-function tests: normalization, degenerate limits, the
// deterministic-variance limit against the lognormal characteristic
// function, branch continuity over a long u range, and exact cumulants.

#include "hslv/heston_cf.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>

namespace {

const hslv::HestonParams kMarket{{1.05, 0.0855, 0.95, 0.0945}, -0.315, 0.0,
                                 1.0};

TEST(HestonCf, NormalizationAndDegenerateTime) {
  const auto one = hslv::heston_char_fn({0.0, 0.0}, 2.0, kMarket);
  EXPECT_NEAR(one.real(), 1.0, 1e-14);
  EXPECT_NEAR(one.imag(), 0.0, 1e-14);

  hslv::HestonParams shifted = kMarket;
  shifted.s0 = 1.3;
  for (double u : {0.5, 3.0, 17.0}) {
    const auto cf = hslv::heston_char_fn({u, 0.0}, 0.0, shifted);
    const auto want = std::exp(std::complex<double>(0.0, u * std::log(1.3)));
    EXPECT_NEAR(std::abs(cf - want), 0.0, 1e-14);
  }
}

TEST(HestonCf, DeterministicVarianceLimit) {
  // gamma -> 0 with v0 = theta freezes the variance at theta; the law of
  // log S_t is then normal with variance theta * t.
  hslv::HestonParams p = kMarket;
  p.cir.gamma = 1e-6;
  p.cir.theta = 0.04;
  p.cir.v0 = 0.04;
  const double t = 1.7;
  for (double u = 0.25; u <= 40.0; u *= 2.0) {
    const auto cf = hslv::heston_char_fn({u, 0.0}, t, p);
    const std::complex<double> log_bs(
        -0.5 * 0.04 * t * u * u,
        u * (std::log(p.s0) + (p.r - 0.5 * 0.04) * t));
    const auto bs = std::exp(log_bs);
    EXPECT_NEAR(std::abs(cf) , std::abs(bs), 1e-4) << "u=" << u;
    EXPECT_NEAR(std::abs(cf - bs), 0.0, 1e-4) << "u=" << u;
  }
}

TEST(HestonCf, ContinuityAlongRealAxis) {
  // The branch-stable form must produce no jumps as u sweeps a long range;
  // increments of the (decaying) cf stay uniformly small on a fine grid.
  const double t = 5.0;
  const double du = 0.01;
  std::complex<double> prev = hslv::heston_char_fn({0.0, 0.0}, t, kMarket);
  double max_jump = 0.0;
  for (double u = du; u <= 200.0; u += du) {
    const auto cur = hslv::heston_char_fn({u, 0.0}, t, kMarket);
    max_jump = std::max(max_jump, std::abs(cur - prev));
    prev = cur;
  }
  EXPECT_LT(max_jump, 0.05);
}

TEST(HestonCf, RejectsNegativeMaturity) {
  EXPECT_THROW(hslv::heston_char_fn({1.0, 0.0}, -0.1, kMarket),
               hslv::InvalidInput);
}

TEST(Cumulants, MarketReferenceValues) {
  const auto c5 = hslv::heston_log_spot_cumulants(5.0, kMarket);
  EXPECT_NEAR(c5.mean, -0.2180132249211464, 1e-15);
  EXPECT_NEAR(c5.variance, 0.6014643084330273, 1e-14);
  EXPECT_NEAR(hslv::heston_log_spot_cumulants(0.25, kMarket).variance,
              0.02424973130125422, 1e-15);
  EXPECT_NEAR(hslv::heston_log_spot_cumulants(1.0, kMarket).variance,
              0.10443772588865743, 1e-15);
}

TEST(Cumulants, MatchCharacteristicFunctionDerivatives) {
  // Central finite differences of the cf at u=0 recover mean and variance.
  const double t = 2.0;
  const double h = 1e-3;
  auto cf = [&](double u) {
    return hslv::heston_char_fn({u, 0.0}, t, kMarket);
  };
  const auto fp = cf(h), fm = cf(-h), f0 = cf(0.0);
  const std::complex<double> i(0.0, 1.0);
  const double mean = std::real((fp - fm) / (2.0 * h * i));
  const double second = std::real((fp - 2.0 * f0 + fm) / (h * h * i * i));
  const auto cum = hslv::heston_log_spot_cumulants(t, kMarket);
  EXPECT_NEAR(mean, cum.mean, 1e-6);
  EXPECT_NEAR(second - mean * mean, cum.variance, 1e-5);
}

TEST(Cumulants, DeterministicVarianceLimitIsThetaT) {
  hslv::HestonParams p = kMarket;
  p.cir.gamma = 1e-8;
  p.cir.theta = 0.04;
  p.cir.v0 = 0.04;
  const auto cum = hslv::heston_log_spot_cumulants(3.0, p);
  EXPECT_NEAR(cum.variance, 0.04 * 3.0, 1e-8);
  EXPECT_NEAR(cum.mean, -0.5 * 0.04 * 3.0, 1e-12);
}

TEST(Cumulants, VarianceGrowsWithMaturity) {
  double prev = 0.0;
  for (double t : {0.25, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0}) {
    const double v = hslv::heston_log_spot_cumulants(t, kMarket).variance;
    EXPECT_GT(v, prev);
    prev = v;
  }
}

}  // namespace
