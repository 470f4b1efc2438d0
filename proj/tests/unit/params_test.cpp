// Parameter validation, the Feller diagnostic, truncation-base rules, and the
// mis-specification map.

#include "hslv/params.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace {

hslv::HestonParams MarketParams() {
  hslv::HestonParams p;
  p.cir = {1.05, 0.0855, 0.95, 0.0945};
  p.rho = -0.315;
  p.r = 0.0;
  p.s0 = 1.0;
  return p;
}

TEST(CirParams, ValidatesPositivity) {
  hslv::CirParams ok{2.0, 0.09, 0.3, 0.04};
  EXPECT_NO_THROW(ok.validate());
  EXPECT_THROW((hslv::CirParams{0.0, 0.09, 0.3, 0.04}.validate()),
               hslv::InvalidInput);
  EXPECT_THROW((hslv::CirParams{2.0, -0.09, 0.3, 0.04}.validate()),
               hslv::InvalidInput);
  EXPECT_THROW((hslv::CirParams{2.0, 0.09, 0.0, 0.04}.validate()),
               hslv::InvalidInput);
  EXPECT_THROW((hslv::CirParams{2.0, 0.09, 0.3, 0.0}.validate()),
               hslv::InvalidInput);
}

TEST(CirParams, FellerDiagnostic) {
  // 2*2*0.09 = 0.36 >= 0.09: satisfied.
  EXPECT_TRUE((hslv::CirParams{2.0, 0.09, 0.3, 0.04}.feller_satisfied()));
  // 2*1.05*0.0855 = 0.17955 < 0.9025: violated, but never an error.
  hslv::CirParams market{1.05, 0.0855, 0.95, 0.0945};
  EXPECT_FALSE(market.feller_satisfied());
  EXPECT_NO_THROW(market.validate());
}

TEST(HestonParams, ValidatesRhoAndSpot) {
  auto p = MarketParams();
  EXPECT_NO_THROW(p.validate());
  p.rho = -1.0;
  EXPECT_THROW(p.validate(), hslv::InvalidInput);
  p.rho = 0.5;
  p.s0 = 0.0;
  EXPECT_THROW(p.validate(), hslv::InvalidInput);
}

TEST(TruncationSpec, DefaultIsQuarterOfSqrtV0) {
  hslv::CirParams cir{2.0, 0.09, 0.3, 0.09};
  const auto spec = hslv::TruncationSpec::defaults_for(cir);
  EXPECT_DOUBLE_EQ(spec.b, 0.075);
  EXPECT_NO_THROW(spec.validate(cir));
}

TEST(TruncationSpec, FloorScalesAsFourthRoot) {
  hslv::TruncationSpec spec{0.3};
  EXPECT_NEAR(spec.floor(0.01), 0.094868329805051374, 1e-15);
  EXPECT_NEAR(spec.floor(1.0), 0.3, 1e-15);
  // Floor shrinks with the step but only like tau^(1/4).
  EXPECT_GT(spec.floor(1e-4), 0.0);
  EXPECT_NEAR(spec.floor(1e-4) / spec.floor(1e-2), std::pow(1e-2, 0.25), 1e-12);
}

TEST(TruncationSpec, RejectsBaseAboveInitialLamperti) {
  hslv::CirParams cir{2.0, 0.09, 0.3, 0.04};  // sqrt(v0) = 0.2
  EXPECT_THROW((hslv::TruncationSpec{0.25}.validate(cir)), hslv::InvalidInput);
  EXPECT_THROW((hslv::TruncationSpec{0.0}.validate(cir)), hslv::InvalidInput);
  EXPECT_NO_THROW((hslv::TruncationSpec{0.2}.validate(cir)));
}

TEST(ModelMap, IdentityAtZero) {
  const auto market = MarketParams();
  const auto model = hslv::derive_model_params(market, 0.0);
  EXPECT_DOUBLE_EQ(model.cir.kappa, market.cir.kappa);
  EXPECT_DOUBLE_EQ(model.cir.theta, market.cir.theta);
  EXPECT_DOUBLE_EQ(model.cir.gamma, market.cir.gamma);
  EXPECT_DOUBLE_EQ(model.cir.v0, market.cir.v0);
  EXPECT_DOUBLE_EQ(model.rho, market.rho);
}

TEST(ModelMap, QuarterModification) {
  const auto model = hslv::derive_model_params(MarketParams(), 0.25);
  EXPECT_NEAR(model.cir.gamma, 0.7125, 1e-15);
  EXPECT_NEAR(model.cir.kappa, 1.3125, 1e-15);
  EXPECT_NEAR(model.rho, -0.39375, 1e-15);
  EXPECT_NEAR(model.cir.theta, 0.064125, 1e-15);
  EXPECT_NEAR(model.cir.v0, 0.118125, 1e-15);
  // Spot and rate pass through untouched.
  EXPECT_DOUBLE_EQ(model.s0, 1.0);
  EXPECT_DOUBLE_EQ(model.r, 0.0);
}

TEST(ModelMap, RejectsCorrelationBlowup) {
  EXPECT_THROW(hslv::derive_model_params(MarketParams(), 3.0),
               hslv::InvalidInput);
}

}  // namespace
