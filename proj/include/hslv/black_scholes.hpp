#pragma once
// Black-Scholes pricing, vega, and implied-volatility inversion. The
// inversion is a bracketed, safeguarded Newton iteration; prices outside the
// open no-arbitrage band raise BandViolation so callers can report the cell
// rather than silently clamping.

#include <cmath>
#include <cstdio>
#include <limits>

#include "hslv/errors.hpp"

namespace hslv {

inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

inline double normal_pdf(double x) {
  constexpr double kInvSqrt2Pi = 0.3989422804014326779;
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

namespace detail {

inline void check_bs_inputs(double s, double K, double T, double r,
                            double sigma) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw InvalidInput("black_scholes: spot must be positive and finite");
  }
  if (!(K > 0.0) || !std::isfinite(K)) {
    throw InvalidInput("black_scholes: strike must be positive and finite");
  }
  if (!(T >= 0.0) || !std::isfinite(T)) {
    throw InvalidInput("black_scholes: maturity must be nonnegative");
  }
  if (!std::isfinite(r)) {
    throw InvalidInput("black_scholes: rate must be finite");
  }
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw InvalidInput("black_scholes: volatility must be nonnegative");
  }
}

}  // namespace detail

// European call value. Degenerate volatility or maturity collapses to the
// discounted intrinsic value.
inline double bs_call_price(double s, double K, double T, double r,
                            double sigma) {
  detail::check_bs_inputs(s, K, T, r, sigma);
  const double disc_K = K * std::exp(-r * T);
  const double vol = sigma * std::sqrt(T);
  if (vol <= 0.0) {
    return std::max(s - disc_K, 0.0);
  }
  const double d1 = (std::log(s / K) + (r + 0.5 * sigma * sigma) * T) / vol;
  const double d2 = d1 - vol;
  return s * normal_cdf(d1) - disc_K * normal_cdf(d2);
}

// European put value, coded directly (not via parity) so that parity can be
// used as a cross-check elsewhere.
inline double bs_put_price(double s, double K, double T, double r,
                           double sigma) {
  detail::check_bs_inputs(s, K, T, r, sigma);
  const double disc_K = K * std::exp(-r * T);
  const double vol = sigma * std::sqrt(T);
  if (vol <= 0.0) {
    return std::max(disc_K - s, 0.0);
  }
  const double d1 = (std::log(s / K) + (r + 0.5 * sigma * sigma) * T) / vol;
  const double d2 = d1 - vol;
  return disc_K * normal_cdf(-d2) - s * normal_cdf(-d1);
}

// dPrice/dSigma, shared by calls and puts.
inline double bs_vega(double s, double K, double T, double r, double sigma) {
  detail::check_bs_inputs(s, K, T, r, sigma);
  const double vol = sigma * std::sqrt(T);
  if (vol <= 0.0) {
    return 0.0;
  }
  const double d1 = (std::log(s / K) + (r + 0.5 * sigma * sigma) * T) / vol;
  return s * normal_pdf(d1) * std::sqrt(T);
}

// Inverts bs_call_price in sigma. The price must lie strictly inside the
// open band ((s - K e^{-rT})^+, s); the returned volatility reproduces the
// price to well below 1e-10 absolute.
inline double implied_vol(double price, double s, double K, double T,
                          double r) {
  detail::check_bs_inputs(s, K, T, r, 0.0);
  if (!(T > 0.0)) {
    throw InvalidInput("implied_vol: maturity must be positive");
  }
  if (!std::isfinite(price)) {
    throw InvalidInput("implied_vol: price must be finite");
  }
  const double lower = std::max(s - K * std::exp(-r * T), 0.0);
  const double upper = s;
  if (!(price > lower) || !(price < upper)) {
    char msg[160];
    std::snprintf(msg, sizeof(msg),
                  "implied_vol: price %.17g outside no-arbitrage band "
                  "(%.17g, %.17g)",
                  price, lower, upper);
    throw BandViolation(msg);
  }

  double lo = 0.0;  // bs(0) = lower < price
  double hi = 1.0;
  while (bs_call_price(s, K, T, r, hi) < price) {
    hi *= 2.0;
    if (hi > 1e7) {
      throw NumericFailure("implied_vol: failed to bracket the root");
    }
  }

  // Start from the at-the-money expansion, clamped into the bracket.
  double sigma = price / s * std::sqrt(2.0 * M_PI / T);
  if (!(sigma > lo) || !(sigma < hi)) {
    sigma = 0.5 * (lo + hi);
  }

  for (int iter = 0; iter < 200; ++iter) {
    const double f = bs_call_price(s, K, T, r, sigma) - price;
    if (f > 0.0) {
      hi = sigma;
    } else if (f < 0.0) {
      lo = sigma;
    } else {
      return sigma;
    }
    if (std::fabs(f) <= 1e-14 * std::max(1.0, price) ||
        hi - lo <= 1e-15 * std::max(1.0, sigma)) {
      return sigma;
    }
    const double vega = bs_vega(s, K, T, r, sigma);
    double next = sigma - f / vega;  // Newton, safeguarded below
    if (!(vega > 1e-300) || !std::isfinite(next) || next <= lo || next >= hi) {
      next = 0.5 * (lo + hi);  // bisect when Newton leaves the bracket
    }
    sigma = next;
  }
  if (std::fabs(bs_call_price(s, K, T, r, sigma) - price) <= 1e-10) {
    return sigma;
  }
  throw NumericFailure("implied_vol: iteration did not converge");
}

}  // namespace hslv
