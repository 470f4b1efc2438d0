#pragma once
// Local variance extracted from a call surface by finite differences:
//
//   sigma_LV^2(t, S) = (dC/dt + r S dC/dK) / max((1/2) S^2 d2C/dK2, floor)
//
// evaluated with central differences in strike and (where the grid allows)
// in maturity, with one-sided maturity differences at the edges. The ratio
// is floored and capped to keep downstream simulation stable when the
// density denominator degenerates in the far wings.

#include <algorithm>
#include <cmath>

#include "hslv/call_surface.hpp"
#include "hslv/errors.hpp"

namespace hslv {

struct DupireConfig {
  double dt_bump = 0.01;       // maturity bump (absolute)
  double dk_bump_rel = 0.01;   // strike bump relative to the query level
  double denom_floor = 1e-6;   // floor on (1/2) S^2 d2C/dK2
  double lv_floor = 1e-4;      // lower clamp on the local variance
  double lv_cap = 4.0;         // upper clamp on the local variance

  void validate() const {
    if (!(dt_bump > 0.0) || !(dk_bump_rel > 0.0) || !(dk_bump_rel < 1.0) ||
        !(denom_floor > 0.0) || !(lv_floor > 0.0) || !(lv_cap > lv_floor)) {
      throw InvalidInput("DupireConfig: bumps, floor, and clamps must be "
                         "positive with lv_cap > lv_floor");
    }
  }
};

inline double dupire_local_variance(const CallSurface& surf, double t,
                                    double S,
                                    const DupireConfig& cfg = DupireConfig{}) {
  cfg.validate();
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw InvalidInput("dupire_local_variance: t must be positive");
  }
  if (t > surf.max_maturity() + 1e-9) {
    throw ExtrapolationError(
        "dupire_local_variance: t beyond the surface grid");
  }
  if (!(S >= surf.min_strike()) || !(S <= surf.max_strike())) {
    throw ExtrapolationError(
        "dupire_local_variance: S outside the surface strike span");
  }
  const double tmax = surf.max_maturity();
  double dcdt;
  if (t - cfg.dt_bump < 1e-8) {
    dcdt = (surf.price(t + cfg.dt_bump, S) - surf.price(t, S)) / cfg.dt_bump;
  } else if (t + cfg.dt_bump > tmax + 1e-12) {
    dcdt = (surf.price(t, S) - surf.price(t - cfg.dt_bump, S)) / cfg.dt_bump;
  } else {
    dcdt = (surf.price(t + cfg.dt_bump, S) - surf.price(t - cfg.dt_bump, S)) /
           (2.0 * cfg.dt_bump);
  }
  const double dk = cfg.dk_bump_rel * S;
  const double cm = surf.price(t, S - dk);
  const double c0 = surf.price(t, S);
  const double cp = surf.price(t, S + dk);
  const double dcdk = (cp - cm) / (2.0 * dk);
  const double d2cdk2 = (cp - 2.0 * c0 + cm) / (dk * dk);
  const double numer = dcdt + surf.r() * S * dcdk;
  const double denom = std::max(0.5 * S * S * d2cdk2, cfg.denom_floor);
  return std::clamp(numer / denom, cfg.lv_floor, cfg.lv_cap);
}

}  // namespace hslv
