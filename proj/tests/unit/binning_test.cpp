#include "hslv/binning.hpp"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "hslv/errors.hpp"
#include "support/kernel_regression.hpp"

namespace hslv {
namespace {

TEST(BinningTest, TwoBinWorkedExample) {
  const std::vector<double> s{1.0, 2.0, 3.0, 4.0};
  const std::vector<double> v{0.1, 0.2, 0.3, 0.4};
  BinSpec spec;
  spec.n_bins = 2;
  const auto ce = estimate_conditional_expectation(s, v, spec);
  ASSERT_EQ(ce.n_bins(), 2u);
  EXPECT_DOUBLE_EQ(ce.bin_means()[0], 0.15);
  EXPECT_DOUBLE_EQ(ce.bin_means()[1], 0.35);
  ASSERT_EQ(ce.bin_edges().size(), 3u);
  EXPECT_DOUBLE_EQ(ce.bin_edges()[0], 1.0);
  EXPECT_DOUBLE_EQ(ce.bin_edges()[1], 2.5);
  EXPECT_DOUBLE_EQ(ce.bin_edges()[2], 4.0);
}

TEST(BinningTest, EvaluatorSelectsBinAndClampsOutside) {
  const auto ce = estimate_conditional_expectation(
      {1.0, 2.0, 3.0, 4.0}, {0.1, 0.2, 0.3, 0.4}, BinSpec{2});
  EXPECT_DOUBLE_EQ(ce(2.4), 0.15);
  EXPECT_DOUBLE_EQ(ce(2.6), 0.35);
  // Interior edges belong to the right bin.
  EXPECT_DOUBLE_EQ(ce(2.5), 0.35);
  // Queries outside the sampled range clamp to the nearest bin.
  EXPECT_DOUBLE_EQ(ce(0.5), 0.15);
  EXPECT_DOUBLE_EQ(ce(10.0), 0.35);
}

TEST(BinningTest, ConstantVarianceGivesConstantMeans) {
  std::vector<double> s, v;
  for (int i = 0; i < 100; ++i) {
    s.push_back(0.5 + 0.01 * i);
    v.push_back(0.07);
  }
  const auto ce = estimate_conditional_expectation(s, v);
  ASSERT_EQ(ce.n_bins(), 20u);
  for (double m : ce.bin_means()) {
    EXPECT_DOUBLE_EQ(m, 0.07);
  }
  for (std::size_t i = 1; i < ce.bin_edges().size(); ++i) {
    EXPECT_GT(ce.bin_edges()[i], ce.bin_edges()[i - 1]);
  }
}

TEST(BinningTest, RemainderSpreadsOverLeadingBins) {
  // 103 samples into 20 bins: the first three bins hold six samples each,
  // the rest five. With v equal to the sample rank the group means pin the
  // exact split.
  std::vector<double> s, v;
  for (int i = 0; i < 103; ++i) {
    s.push_back(static_cast<double>(i));
    v.push_back(static_cast<double>(i));
  }
  const auto ce = estimate_conditional_expectation(s, v);
  EXPECT_DOUBLE_EQ(ce.bin_means()[0], 2.5);
  EXPECT_DOUBLE_EQ(ce.bin_means()[1], 8.5);
  EXPECT_DOUBLE_EQ(ce.bin_means()[2], 14.5);
  EXPECT_DOUBLE_EQ(ce.bin_means()[3], 20.0);
  EXPECT_DOUBLE_EQ(ce.bin_means()[4], 25.0);
}

TEST(BinningTest, RecoversMonotoneRelation) {
  std::vector<double> s, v;
  for (int i = 0; i < 2000; ++i) {
    const double x = 0.5 + 1.5 * i / 1999.0;
    s.push_back(x);
    v.push_back(x * x);
  }
  const auto ce = estimate_conditional_expectation(s, v);
  double prev = 0.0;
  for (std::size_t g = 0; g < ce.n_bins(); ++g) {
    EXPECT_GT(ce.bin_means()[g], prev);
    prev = ce.bin_means()[g];
    const double mid =
        0.5 * (ce.bin_edges()[g] + ce.bin_edges()[g + 1]);
    EXPECT_NEAR(ce.bin_means()[g], mid * mid, 0.01);
  }
}

TEST(BinningTest, TiedAbscissaeAreGroupedByIndex) {
  const auto ce = estimate_conditional_expectation(
      {1.0, 1.0, 1.0, 1.0}, {1.0, 2.0, 3.0, 4.0}, BinSpec{2});
  EXPECT_DOUBLE_EQ(ce.bin_means()[0], 1.5);
  EXPECT_DOUBLE_EQ(ce.bin_means()[1], 3.5);
  // Degenerate edges: every query clamps to one of the two bins.
  EXPECT_DOUBLE_EQ(ce(1.0), 1.5);
  EXPECT_DOUBLE_EQ(ce(2.0), 3.5);
}

TEST(BinningTest, InputValidation) {
  EXPECT_THROW(estimate_conditional_expectation({1.0, 2.0}, {0.1, 0.2, 0.3}),
               InvalidInput);
  EXPECT_THROW(
      estimate_conditional_expectation({1.0, 2.0, 3.0}, {0.1, 0.2, 0.3},
                                       BinSpec{4}),
      InvalidInput);
  EXPECT_THROW(
      estimate_conditional_expectation({1.0, 2.0, 3.0}, {0.1, 0.2, 0.3},
                                       BinSpec{1}),
      InvalidInput);
  EXPECT_THROW(estimate_conditional_expectation(
                   {1.0, std::nan(""), 3.0}, {0.1, 0.2, 0.3}, BinSpec{2}),
               InvalidInput);
  EXPECT_THROW(ConditionalExpectation({1.0, 0.5}, {0.1}), InvalidInput);
  EXPECT_THROW(ConditionalExpectation({1.0, 2.0}, {}), InvalidInput);
}

TEST(KernelRegressionTest, SmoothsLinearDataExactlyInInterior) {
  std::vector<double> x, y;
  for (int i = 0; i <= 400; ++i) {
    x.push_back(i / 100.0);
    y.push_back(2.0 + 3.0 * (i / 100.0));
  }
  const double bw = hslv_test::silverman_bandwidth(x);
  EXPECT_GT(bw, 0.0);
  // Symmetric kernel mass around an interior query leaves linear data
  // unbiased.
  EXPECT_NEAR(hslv_test::nadaraya_watson(x, y, 2.0, bw), 8.0, 1e-6);
  EXPECT_NEAR(hslv_test::nadaraya_watson(x, y, 1.5, 0.1), 6.5, 1e-6);
}

TEST(KernelRegressionTest, AgreesWithBinnedMeansOnSmoothData) {
  std::vector<double> s, v;
  for (int i = 0; i < 5000; ++i) {
    const double x = 0.5 + 1.5 * i / 4999.0;
    s.push_back(x);
    v.push_back(0.05 + 0.02 * std::sin(3.0 * x));
  }
  const auto ce = estimate_conditional_expectation(s, v);
  const double bw = hslv_test::silverman_bandwidth(s);
  for (double q : {0.8, 1.2, 1.6}) {
    EXPECT_NEAR(ce(q), hslv_test::nadaraya_watson(s, v, q, bw), 5e-3);
  }
}

}  // namespace
}  // namespace hslv
