#pragma once
// Small summary-statistics helpers shared by the pricing engine and the
// convergence experiments.

#include <cmath>
#include <cstddef>
#include <vector>

#include "hslv/errors.hpp"

namespace hslv {

inline double mean(const std::vector<double>& xs) {
  if (xs.empty()) {
    throw InvalidInput("mean: empty sample");
  }
  double acc = 0.0;
  for (const double x : xs) {
    acc += x;
  }
  return acc / static_cast<double>(xs.size());
}

// Unbiased (n-1) sample variance; defined as zero for fewer than two samples.
inline double sample_variance(const std::vector<double>& xs) {
  const std::size_t n = xs.size();
  if (n < 2) {
    return 0.0;
  }
  const double m = mean(xs);
  double acc = 0.0;
  for (const double x : xs) {
    const double d = x - m;
    acc += d * d;
  }
  return acc / static_cast<double>(n - 1);
}

struct MeanWithError {
  double mean = 0.0;
  double std_error = 0.0;  // standard error of the mean; 0 when n < 2
  std::size_t count = 0;
};

inline MeanWithError mean_with_error(const std::vector<double>& xs) {
  MeanWithError out;
  out.count = xs.size();
  out.mean = mean(xs);
  if (out.count >= 2) {
    out.std_error =
        std::sqrt(sample_variance(xs) / static_cast<double>(out.count));
  }
  return out;
}

// Least-squares slope of y against x. Used to fit convergence orders from
// (log step size, log error) pairs.
inline double least_squares_slope(const std::vector<double>& x,
                                  const std::vector<double>& y) {
  if (x.size() != y.size()) {
    throw InvalidInput("least_squares_slope: size mismatch");
  }
  if (x.size() < 2) {
    throw InvalidInput("least_squares_slope: need at least two points");
  }
  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    sxx += dx * dx;
    sxy += dx * (y[i] - my);
  }
  if (sxx <= 0.0) {
    throw InvalidInput("least_squares_slope: abscissae are all equal");
  }
  return sxy / sxx;
}

}  // namespace hslv
