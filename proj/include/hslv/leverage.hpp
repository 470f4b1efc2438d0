#pragma once
// Leverage calibration for the stochastic-local-volatility engine. At each
// step the squared leverage is the ratio of the market's Dupire local
// variance to the simulated conditional expectation of the variance given
// the asset level, estimated by quantile binning of the path cross-section.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "hslv/binning.hpp"
#include "hslv/call_surface.hpp"
#include "hslv/dupire.hpp"
#include "hslv/errors.hpp"
#include "hslv/stats.hpp"

namespace hslv {

struct LeverageSpec {
  BinSpec bins;
  // Floor applied to the conditional-expectation denominator.
  double eps_v = 1e-4;
  // Clamp band for the squared leverage itself. The cap bounds the effective
  // instantaneous variance at cap_sq times the path's variance, taming the
  // explosive feedback when a sparse bin pairs a small conditional
  // expectation with a large local variance.
  double floor_sq = 1e-6;
  double cap_sq = 16.0;
  // Earliest maturity at which the call surface is differentiated. Zero
  // selects an automatic floor of twice the finite-difference time bump,
  // below which the surface derivatives are not resolvable.
  double t_floor = 0.0;

  void validate() const {
    bins.validate();
    if (!(eps_v > 0.0)) {
      throw InvalidInput("LeverageSpec: eps_v must be positive");
    }
    if (!(floor_sq > 0.0)) {
      throw InvalidInput("LeverageSpec: floor_sq must be positive");
    }
    if (!(cap_sq > floor_sq)) {
      throw InvalidInput("LeverageSpec: cap_sq must exceed floor_sq");
    }
    if (!(t_floor >= 0.0)) {
      throw InvalidInput("LeverageSpec: t_floor must be nonnegative");
    }
  }

  double effective_t_floor(const DupireConfig& dupire) const {
    return t_floor > 0.0 ? t_floor : 2.0 * dupire.dt_bump;
  }
};

struct LeverageEvaluation {
  double t = 0.0;
  // Per-path values, aligned with the inputs.
  std::vector<double> sigma_hat_sq;
  std::vector<double> local_variance;
  std::vector<double> cond_variance;
  // The binned estimator, absent when the cross-section is a single atom.
  std::optional<ConditionalExpectation> binned;
};

// Computes the squared leverage for every path in a cross-section.
//
// The asset arguments are spot levels (not log-spot). Dupire queries are
// clamped to the surface's strike span and to the spec's maturity floor;
// the conditional expectation is evaluated at the raw asset level. When all
// asset levels coincide (the time-zero atom), the conditional expectation
// degenerates to the plain cross-sectional mean of the variance.
inline LeverageEvaluation leverage_squared(const CallSurface& surface,
                                           double t,
                                           const std::vector<double>& s_paths,
                                           const std::vector<double>& v_paths,
                                           const DupireConfig& dupire = {},
                                           const LeverageSpec& spec = {}) {
  spec.validate();
  dupire.validate();
  if (s_paths.empty() || s_paths.size() != v_paths.size()) {
    throw InvalidInput("leverage_squared: asset and variance cross-sections must be nonempty and equal length");
  }
  if (!std::isfinite(t) || t < 0.0) {
    throw InvalidInput("leverage_squared: time must be finite and nonnegative");
  }
  for (std::size_t j = 0; j < s_paths.size(); ++j) {
    if (!std::isfinite(s_paths[j]) || !(s_paths[j] > 0.0) ||
        !std::isfinite(v_paths[j]) || v_paths[j] < 0.0) {
      throw InvalidInput("leverage_squared: cross-section values must be finite, with positive asset levels and nonnegative variances");
    }
  }

  const std::size_t n = s_paths.size();
  LeverageEvaluation out;
  out.t = t;
  out.sigma_hat_sq.resize(n);
  out.local_variance.resize(n);
  out.cond_variance.resize(n);

  const auto [s_min_it, s_max_it] =
      std::minmax_element(s_paths.begin(), s_paths.end());
  const bool atom = (*s_min_it == *s_max_it);
  double atom_mean = 0.0;
  if (atom) {
    atom_mean = mean(v_paths);
  } else {
    const std::size_t usable_bins =
        std::min<std::size_t>(spec.bins.n_bins, n);
    BinSpec effective_bins = spec.bins;
    effective_bins.n_bins = std::max<std::size_t>(usable_bins, 2);
    out.binned =
        estimate_conditional_expectation(s_paths, v_paths, effective_bins);
  }

  const double t_eval = std::max(t, spec.effective_t_floor(dupire));
  const double k_lo = surface.min_strike();
  const double k_hi = surface.max_strike();
  for (std::size_t j = 0; j < n; ++j) {
    const double s_query = std::clamp(s_paths[j], k_lo, k_hi);
    const double lv = dupire_local_variance(surface, t_eval, s_query, dupire);
    const double ev = atom ? atom_mean : (*out.binned)(s_paths[j]);
    const double ratio = lv / std::max(ev, spec.eps_v);
    out.local_variance[j] = lv;
    out.cond_variance[j] = ev;
    out.sigma_hat_sq[j] = std::clamp(ratio, spec.floor_sq, spec.cap_sq);
  }
  return out;
}

}  // namespace hslv
