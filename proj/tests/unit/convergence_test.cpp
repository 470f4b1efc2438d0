#include "hslv/convergence.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace hslv {
namespace {

ConvergenceConfig small_study(SchemeKind scheme) {
  ConvergenceConfig cfg;
  cfg.scheme = scheme;
  cfg.paths = 1000;
  cfg.reference_level = 1024;
  cfg.levels = {8, 16, 32, 64, 128};
  return cfg;
}

TEST(FitPowerLaw, RecoversASyntheticHalfOrderLawExactly) {
  std::vector<ConvergenceLevel> levels;
  for (std::size_t n : {8, 16, 32, 64, 128}) {
    const double tau = 1.0 / static_cast<double>(n);
    levels.push_back({n, tau, 2.0 * std::sqrt(tau), 0.0});
  }
  const OrderFit fit = fit_power_law(levels);
  EXPECT_NEAR(fit.slope, 0.5, 1e-12);
  EXPECT_NEAR(fit.intercept, std::log(2.0), 1e-12);
  EXPECT_TRUE(fit.excluded_levels.empty());
}

TEST(FitPowerLaw, ExcludesZeroErrorLevelsFromTheFit) {
  std::vector<ConvergenceLevel> levels;
  for (std::size_t n : {8, 16, 32, 64, 128}) {
    const double tau = 1.0 / static_cast<double>(n);
    levels.push_back({n, tau, 3.0 * tau, 0.0});
  }
  levels[2].l2_error = 0.0;  // A degenerate level must not poison the log fit.
  const OrderFit fit = fit_power_law(levels);
  ASSERT_EQ(fit.excluded_levels.size(), 1u);
  EXPECT_EQ(fit.excluded_levels[0], 32u);
  EXPECT_NEAR(fit.slope, 1.0, 1e-12);
}

TEST(FitPowerLaw, RejectsDegenerateInputs) {
  std::vector<ConvergenceLevel> three = {
      {8, 0.125, 0.1, 0.0}, {16, 0.0625, 0.05, 0.0}, {32, 0.03125, 0.025, 0.0}};
  EXPECT_THROW(fit_power_law(three), InvalidInput);

  std::vector<ConvergenceLevel> zeros = {
      {8, 0.125, 0.0, 0.0}, {16, 0.0625, 0.0, 0.0},
      {32, 0.03125, 0.0, 0.0}, {64, 0.015625, 0.0, 0.0}};
  EXPECT_THROW(fit_power_law(zeros), InvalidInput);

  std::vector<ConvergenceLevel> one_usable = {
      {8, 0.125, 0.1, 0.0}, {16, 0.0625, 0.0, 0.0},
      {32, 0.03125, 0.0, 0.0}, {64, 0.015625, 0.0, 0.0}};
  EXPECT_THROW(fit_power_law(one_usable), InvalidInput);
}

TEST(StrongError, SchemeAtTheReferenceResolutionHasZeroDistance) {
  const CirParams params{2.0, 0.09, 0.3, 0.09};
  const BrownianGrid grid(7, 1.0, 64, 50);
  for (SchemeKind scheme : {SchemeKind::FullTruncationEuler,
                            SchemeKind::TruncatedLamperti,
                            SchemeKind::BackwardLamperti}) {
    const StrongError err = strong_error(scheme, params,
                                         TruncationSpec::defaults_for(params),
                                         grid, 64);
    EXPECT_EQ(err.l2_L, 0.0) << scheme_label(scheme);
    EXPECT_EQ(err.l1_V, 0.0) << scheme_label(scheme);
  }
}

TEST(StrongError, RefusesTheExactSamplerAndNonDyadicGrids) {
  const CirParams params{2.0, 0.09, 0.3, 0.09};
  const TruncationSpec trunc = TruncationSpec::defaults_for(params);
  const BrownianGrid grid(7, 1.0, 96, 10);
  EXPECT_THROW(strong_error(SchemeKind::ExactNcx2, params, trunc, grid, 24),
               InvalidInput);
  // 96 / 9 is not an integer, 96 / 10 neither; 96 / 24 = 4 works.
  EXPECT_THROW(strong_error(SchemeKind::TruncatedLamperti, params, trunc, grid, 9),
               InvalidInput);
  EXPECT_NO_THROW(
      strong_error(SchemeKind::TruncatedLamperti, params, trunc, grid, 24));
  // 96 / 32 = 3 divides evenly but is not a power of two.
  EXPECT_THROW(strong_error(SchemeKind::TruncatedLamperti, params, trunc, grid, 32),
               InvalidInput);
}

TEST(ConvergenceConfigTest, ValidationCatchesIllFormedStudies) {
  EXPECT_NO_THROW(small_study(SchemeKind::TruncatedLamperti).validate());

  ConvergenceConfig cfg = small_study(SchemeKind::TruncatedLamperti);
  cfg.levels = {8, 16, 16, 32};
  EXPECT_THROW(cfg.validate(), InvalidInput);

  cfg = small_study(SchemeKind::TruncatedLamperti);
  cfg.levels = {8, 24};  // 24 / 8 = 3: refinement must proceed by doublings.
  EXPECT_THROW(cfg.validate(), InvalidInput);

  cfg = small_study(SchemeKind::TruncatedLamperti);
  cfg.reference_level = 256;  // Less than four times the finest level.
  EXPECT_THROW(cfg.validate(), InvalidInput);

  cfg = small_study(SchemeKind::TruncatedLamperti);
  cfg.paths = 0;
  EXPECT_THROW(cfg.validate(), InvalidInput);

  cfg = small_study(SchemeKind::TruncatedLamperti);
  cfg.horizon = 0.0;
  EXPECT_THROW(cfg.validate(), InvalidInput);

  cfg = small_study(SchemeKind::ExactNcx2);
  EXPECT_THROW(cfg.validate(), InvalidInput);

  cfg = small_study(SchemeKind::TruncatedLamperti);
  cfg.levels.clear();
  EXPECT_THROW(cfg.validate(), InvalidInput);
}

TEST(ConvergenceStudyTest, TransformedSchemesConvergeAtFirstOrder) {
  // With a constant diffusion coefficient in the transformed variable the
  // Euler-type updates are exact in the noise term, so the pathwise error is
  // driven by the drift alone and shrinks linearly in the step size.
  const ConvergenceStudy trunc =
      run_convergence_study(small_study(SchemeKind::TruncatedLamperti));
  EXPECT_GT(trunc.fit.slope, 0.85);
  EXPECT_LT(trunc.fit.slope, 1.25);
  for (std::size_t k = 1; k < trunc.results.size(); ++k) {
    EXPECT_LT(trunc.results[k].l2_error, trunc.results[k - 1].l2_error);
    EXPECT_LT(trunc.results[k].l1_error_V, trunc.results[k - 1].l1_error_V);
  }

  const ConvergenceStudy back =
      run_convergence_study(small_study(SchemeKind::BackwardLamperti));
  EXPECT_GT(back.fit.slope, 0.80);
  EXPECT_LT(back.fit.slope, 1.15);
  for (std::size_t k = 1; k < back.results.size(); ++k) {
    EXPECT_LT(back.results[k].l2_error, back.results[k - 1].l2_error);
  }
}

TEST(ConvergenceStudyTest, UntransformedEulerConvergesMoreSlowly) {
  const ConvergenceStudy euler =
      run_convergence_study(small_study(SchemeKind::FullTruncationEuler));
  EXPECT_GT(euler.fit.slope, 0.55);
  EXPECT_LT(euler.fit.slope, 0.90);
  const ConvergenceStudy trunc =
      run_convergence_study(small_study(SchemeKind::TruncatedLamperti));
  EXPECT_LT(euler.fit.slope, trunc.fit.slope);
}

TEST(ConvergenceStudyTest, ResultsAreDeterministicAndThreadInvariant) {
  ConvergenceConfig cfg = small_study(SchemeKind::TruncatedLamperti);
  cfg.levels = {8, 16, 32, 64};
  cfg.reference_level = 256;
  cfg.paths = 400;
  const ConvergenceStudy a = run_convergence_study(cfg);
  const ConvergenceStudy b = run_convergence_study(cfg);
  cfg.threads = 3;
  const ConvergenceStudy c = run_convergence_study(cfg);
  ASSERT_EQ(a.results.size(), b.results.size());
  ASSERT_EQ(a.results.size(), c.results.size());
  for (std::size_t k = 0; k < a.results.size(); ++k) {
    EXPECT_EQ(a.results[k].l2_error, b.results[k].l2_error);
    EXPECT_EQ(a.results[k].l1_error_V, b.results[k].l1_error_V);
    EXPECT_EQ(a.results[k].l2_error, c.results[k].l2_error);
    EXPECT_EQ(a.results[k].l1_error_V, c.results[k].l1_error_V);
  }
}

TEST(ConvergenceStudyTest, EstimateOrderMatchesTheStoredFit) {
  ConvergenceConfig cfg = small_study(SchemeKind::BackwardLamperti);
  cfg.levels = {8, 16, 32, 64};
  cfg.reference_level = 256;
  cfg.paths = 400;
  const ConvergenceStudy study = run_convergence_study(cfg);
  const OrderFit re = estimate_order(study);
  EXPECT_DOUBLE_EQ(re.slope, study.fit.slope);
  EXPECT_DOUBLE_EQ(re.intercept, study.fit.intercept);
}

TEST(ConvergenceStudyTest, VanishingVolOfVolReducesToTheVarianceOde) {
  // As the vol-of-vol vanishes the implicit update becomes a deterministic
  // recursion whose limit is sqrt(theta + (v0 - theta) exp(-kappa t)); halving
  // the step should halve the gap to that limit.
  const CirParams params{2.0, 0.09, 1e-8, 0.13};
  const double horizon = 1.0;
  const double exact =
      std::sqrt(params.theta + (params.v0 - params.theta) *
                                   std::exp(-params.kappa * horizon));
  double previous_error = 0.0;
  for (std::size_t n : {64u, 128u, 256u}) {
    const double tau = horizon / static_cast<double>(n);
    double level = std::sqrt(params.v0);
    for (std::size_t i = 0; i < n; ++i) {
      level = step_backward(level, 0.0, tau, params).L_next;
    }
    const double error = std::fabs(level - exact);
    EXPECT_GT(error, 0.0);
    if (previous_error > 0.0) {
      const double ratio = previous_error / error;
      EXPECT_GT(ratio, 1.8);
      EXPECT_LT(ratio, 2.2);
    }
    previous_error = error;
  }
}

}  // namespace
}  // namespace hslv
