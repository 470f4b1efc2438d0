#pragma once

// Counter-based random number generation.
//
// The generator is the Philox4x32-10 block cipher: a 128-bit counter and a
// 64-bit key are mixed through ten multiply/xor rounds into 128 pseudo-random
// bits. Because every output is a pure function of (key, counter), any draw
// can be addressed directly — there is no hidden state to fast-forward — and
// parallel consumers can never perturb each other's sequences.
//
// Layout used here:
//   key          = the 64-bit seed
//   counter word = (block index, stream id), 64 bits each
// Each 128-bit cipher output provides two 64-bit lanes; logical draw number n
// maps to block n>>1, lane n&1. A RandomStream pins (seed, stream id) and
// walks the draw counter.

#include <cmath>
#include <cstdint>
#include <limits>

#include "hslv/errors.hpp"

namespace hslv {

namespace detail {

struct PhiloxBlock {
  std::uint32_t x[4];
};

// One invocation of the 10-round Philox4x32 keyed bijection.
inline PhiloxBlock philox4x32_10(PhiloxBlock ctr, std::uint32_t k0,
                                 std::uint32_t k1) {
  constexpr std::uint32_t kM0 = 0xD2511F53u;
  constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u;
  constexpr std::uint32_t kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr.x[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr.x[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    ctr = PhiloxBlock{{hi1 ^ ctr.x[1] ^ k0, lo1, hi0 ^ ctr.x[3] ^ k1, lo0}};
    k0 += kW0;
    k1 += kW1;
  }
  return ctr;
}

}  // namespace detail

// Inverse of the standard normal CDF (Wichura's double-precision rational
// approximations; relative accuracy near machine precision over (0,1)).
inline double normal_icdf(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw InvalidInput("normal_icdf: probability must lie strictly in (0,1)");
  }
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    const double num =
        q * (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                   6.7265770927008700853e4) *
                      r +
                  4.5921953931549871457e4) *
                     r +
                 1.3731693765509461125e4) *
                    r +
                1.9715909503065514427e3) *
                   r +
               1.3314166789178437745e2) *
                  r +
              3.3871328727963666080e0);
    const double den =
        (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
              3.9307895800092710610e4) *
                 r +
             2.1213794301586595867e4) *
                r +
            5.3941960214247511077e3) *
               r +
           6.8718700749205790830e2) *
              r +
          4.2313330701600911252e1) *
             r +
         1.0);
    return num / den;
  }
  double r = (q < 0.0) ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    const double num =
        (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
              2.41780725177450611770e-1) *
                 r +
             1.27045825245236838258e0) *
                r +
            3.64784832476320460504e0) *
               r +
           5.76949722146069140550e0) *
              r +
          4.63033784615654529590e0) *
             r +
         1.42343711074968357734e0);
    const double den =
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
              1.51986665636164571966e-2) *
                 r +
             1.48103976427480074590e-1) *
                r +
            6.89767334985100004550e-1) *
               r +
           1.67638483018380384940e0) *
              r +
          2.05319162663775882187e0) *
             r +
         1.0);
    value = num / den;
  } else {
    r -= 5.0;
    const double num =
        (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
              1.24266094738807843860e-3) *
                 r +
             2.65321895265761230930e-2) *
                r +
            2.96560571828504891230e-1) *
               r +
           1.78482653991729133580e0) *
              r +
          5.46378491116411436990e0) *
             r +
         6.65790464350110377720e0);
    const double den =
        (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) *
                  r +
              1.84631831751005468180e-5) *
                 r +
             7.86869131145613259100e-4) *
                r +
            1.48753612908506148525e-2) *
               r +
           1.36929880922735805310e-1) *
              r +
          5.99832206555887937690e-1) *
             r +
         1.0);
    value = num / den;
  }
  return (q < 0.0) ? -value : value;
}

// Reserved stream-id domains. A consumer's stream id is
// domain_base + local index, which keeps the id spaces of independent
// consumers (grid noise vs. scheme-internal sampling) disjoint.
namespace stream_domain {
inline constexpr std::uint64_t kDomainShift = 40;
inline constexpr std::uint64_t kGridW = 0ull << kDomainShift;
inline constexpr std::uint64_t kGridWTilde = 1ull << kDomainShift;
inline constexpr std::uint64_t kVarianceSampler = 2ull << kDomainShift;
inline constexpr std::uint64_t kAuxiliary = 3ull << kDomainShift;
}  // namespace stream_domain

// Addressable random stream: a (seed, stream_id) pair plus a draw counter.
// Identical (seed, stream_id, counter) always reproduces the same value, no
// matter how many other streams exist or in which order they are consumed.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id,
               std::uint64_t counter = 0)
      : seed_(seed), stream_id_(stream_id), counter_(counter) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  std::uint64_t counter() const { return counter_; }
  void set_counter(std::uint64_t c) { counter_ = c; }

  // Raw 64-bit word for an explicit draw index (does not advance the stream).
  std::uint64_t u64_at(std::uint64_t draw_index) const {
    const std::uint64_t block = draw_index >> 1;
    detail::PhiloxBlock ctr{{static_cast<std::uint32_t>(block),
                             static_cast<std::uint32_t>(block >> 32),
                             static_cast<std::uint32_t>(stream_id_),
                             static_cast<std::uint32_t>(stream_id_ >> 32)}};
    const detail::PhiloxBlock out = detail::philox4x32_10(
        ctr, static_cast<std::uint32_t>(seed_),
        static_cast<std::uint32_t>(seed_ >> 32));
    if ((draw_index & 1) == 0) {
      return (static_cast<std::uint64_t>(out.x[1]) << 32) | out.x[0];
    }
    return (static_cast<std::uint64_t>(out.x[3]) << 32) | out.x[2];
  }

  // Uniform in the open interval (0,1) for an explicit draw index.
  double uniform_at(std::uint64_t draw_index) const {
    const std::uint64_t bits = u64_at(draw_index) >> 11;
    double u = (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    // (2^53 - 0.5) rounds up to 2^53, which would map to exactly 1.0; nudge
    // that single extreme value back inside the open interval.
    if (u >= 1.0) u = 0x1.fffffffffffffp-1;
    return u;
  }

  std::uint64_t next_u64() { return u64_at(counter_++); }
  double next_uniform() { return uniform_at(counter_++); }

  // One standard normal variate by inverse-CDF transform. Consumes exactly
  // one draw, so consumption per variate is a fixed, known amount.
  double next_normal() { return normal_icdf(next_uniform()); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t counter_;
};

// One N(0,1) variate from the stream (named free-function form).
inline double sample_standard_normal(RandomStream& stream) {
  return stream.next_normal();
}

}  // namespace hslv
