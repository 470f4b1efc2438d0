#pragma once

// Non-uniform sampling built on RandomStream: gamma, Poisson, and (noncentral)
// chi-square variates. All routines consume draws sequentially from the
// caller's stream; rejection loops consume a variable number of draws, which
// is safe because each simulation path owns a private stream.

#include <cmath>
#include <cstdint>

#include "hslv/errors.hpp"
#include "hslv/rng.hpp"

namespace hslv {

// Gamma(shape, scale=1) via the Marsaglia–Tsang squeeze method. Shapes below
// one are boosted through the Gamma(shape+1) * U^(1/shape) identity.
inline double sample_gamma(RandomStream& stream, double shape) {
  if (!(shape > 0.0)) {
    throw InvalidInput("sample_gamma: shape must be positive");
  }
  double boost = 1.0;
  if (shape < 1.0) {
    const double u = stream.next_uniform();
    boost = std::pow(u, 1.0 / shape);
    shape += 1.0;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / (3.0 * std::sqrt(d));
  for (;;) {
    double x;
    double v;
    do {
      x = stream.next_normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = stream.next_uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) {
      return boost * d * v;
    }
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
      return boost * d * v;
    }
  }
}

// Poisson(mean). Small means use Knuth's product-of-uniforms; large means use
// Hörmann's transformed-rejection (PTRS) sampler.
inline std::uint64_t sample_poisson(RandomStream& stream, double mean) {
  if (!(mean >= 0.0)) {
    throw InvalidInput("sample_poisson: mean must be nonnegative");
  }
  if (mean == 0.0) return 0;
  if (mean < 10.0) {
    const double threshold = std::exp(-mean);
    std::uint64_t k = 0;
    double prod = stream.next_uniform();
    while (prod > threshold) {
      ++k;
      prod *= stream.next_uniform();
    }
    return k;
  }
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = stream.next_uniform() - 0.5;
    const double v = stream.next_uniform();
    const double us = 0.5 - std::fabs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= v_r) {
      return static_cast<std::uint64_t>(kf);
    }
    if (kf < 0.0 || (us < 0.013 && v > us)) {
      continue;
    }
    const double lhs =
        std::log(v * inv_alpha / (a / (us * us) + b));
    const double rhs = -mean + kf * loglam - std::lgamma(kf + 1.0);
    if (lhs <= rhs) {
      return static_cast<std::uint64_t>(kf);
    }
  }
}

// Central chi-square with (possibly non-integer) positive dof.
inline double sample_chisq(RandomStream& stream, double dof) {
  if (!(dof > 0.0)) {
    throw InvalidInput("sample_chisq: dof must be positive");
  }
  return 2.0 * sample_gamma(stream, 0.5 * dof);
}

// Noncentral chi-square with dof > 0 (non-integer allowed) and
// noncentrality >= 0, via the standard decompositions:
//   dof > 1:  (Z + sqrt(lambda))^2 + chi2(dof - 1)
//   dof <= 1: chi2(dof + 2 J) with J ~ Poisson(lambda / 2)
inline double sample_noncentral_chisq(RandomStream& stream, double dof,
                                      double noncentrality) {
  if (!(dof > 0.0)) {
    throw InvalidInput("sample_noncentral_chisq: dof must be positive");
  }
  if (!(noncentrality >= 0.0)) {
    throw InvalidInput(
        "sample_noncentral_chisq: noncentrality must be nonnegative");
  }
  if (dof > 1.0) {
    const double z = stream.next_normal() + std::sqrt(noncentrality);
    return z * z + 2.0 * sample_gamma(stream, 0.5 * (dof - 1.0));
  }
  const std::uint64_t j = sample_poisson(stream, 0.5 * noncentrality);
  return sample_chisq(stream, dof + 2.0 * static_cast<double>(j));
}

}  // namespace hslv
