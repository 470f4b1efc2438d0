#pragma once

// The four variance discretizations.
//
// Two of them act on the Lamperti coordinate L = sqrt(V), where the variance
// process has unit-free diffusion gamma/2 and singular drift
//   phi(x) = (kappa/2) (theta/x - x):
//
//   BackwardLamperti  — drift-implicit Euler; the implicit relation
//                       L = a + (kappa tau / 2)(theta/L - L),
//                       a = L_n + (gamma/2) dW, has the unique positive root
//                       L = [a + sqrt(a^2 + kappa tau theta (2 + kappa tau))]
//                           / (2 + kappa tau),
//                       evaluated in a cancellation-free form for a < 0.
//   TruncatedLamperti — explicit Euler with the drift argument clamped to the
//                       running floor b tau^(1/4); the raw iterate L is the
//                       recursion state (it may cross the floor), while the
//                       output fed to the asset step is the clamped value
//                       squared.
//
// The baselines operate on V directly:
//
//   FullTruncationEuler — explicit Euler with V^+ = max(V, 0) inside drift
//                         and diffusion; the signed iterate is the recursion
//                         state and max(V_next, 0) is the output.
//   ExactNcx2           — exact transition sampling: V' = c chi'^2(d, lambda)
//                         with c = gamma^2 (1 - e^{-kappa tau}) / (4 kappa),
//                         d = 4 kappa theta / gamma^2,
//                         lambda = V e^{-kappa tau} / c.
//
// Recursion-state rule: continue Lamperti paths with L_next (raw, untruncated
// for TruncatedLamperti), FullTruncationEuler with the signed V_next, and
// ExactNcx2 with V_next. V_effective is what the asset step consumes and is
// nonnegative for every scheme.

#include <cmath>
#include <string>
#include <vector>

#include "hslv/brownian.hpp"
#include "hslv/errors.hpp"
#include "hslv/params.hpp"
#include "hslv/rng.hpp"
#include "hslv/sampling.hpp"

namespace hslv {

enum class SchemeKind {
  FullTruncationEuler,
  ExactNcx2,
  TruncatedLamperti,
  BackwardLamperti,
};

// Short labels used in table files and CLI arguments.
inline std::string scheme_label(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::FullTruncationEuler: return "Euler";
    case SchemeKind::ExactNcx2: return "AES";
    case SchemeKind::TruncatedLamperti: return "Truncated";
    case SchemeKind::BackwardLamperti: return "Backward";
  }
  throw InvalidInput("scheme_label: unknown scheme");
}

inline SchemeKind parse_scheme(const std::string& name) {
  if (name == "Euler" || name == "FullTruncationEuler") {
    return SchemeKind::FullTruncationEuler;
  }
  if (name == "AES" || name == "ExactNcx2") return SchemeKind::ExactNcx2;
  if (name == "Truncated" || name == "TruncatedLamperti") {
    return SchemeKind::TruncatedLamperti;
  }
  if (name == "Backward" || name == "BackwardLamperti") {
    return SchemeKind::BackwardLamperti;
  }
  throw InvalidInput("parse_scheme: unknown scheme name '" + name + "'");
}

// Lamperti drift phi(x) = (kappa/2)(theta/x - x).
inline double phi(double x, const CirParams& params) {
  if (!(x > 0.0)) {
    throw InvalidInput("phi: argument must be positive");
  }
  return 0.5 * params.kappa * (params.theta / x - x);
}

// Truncation map: clamp from below at the running floor.
inline double truncate_at_floor(double x, double floor_value) {
  return x < floor_value ? floor_value : x;
}

struct VarianceStepResult {
  double L_next = 0.0;       // Lamperti coordinate (recursion state for the
                             // Lamperti schemes; sqrt(V_effective) otherwise)
  double V_next = 0.0;       // variance recursion state (signed for the
                             // explicit Euler baseline)
  double V_effective = 0.0;  // nonnegative variance fed to the asset step
};

// Drift-implicit Lamperti step via the closed-form positive root.
inline VarianceStepResult step_backward(double L_n, double dW, double tau,
                                        const CirParams& params) {
  if (!(tau > 0.0)) throw InvalidInput("step_backward: tau must be positive");
  if (!std::isfinite(L_n) || !std::isfinite(dW)) {
    throw NumericFailure("step_backward: non-finite input state");
  }
  const double a = L_n + 0.5 * params.gamma * dW;
  const double kt = params.kappa * tau;
  const double denom = 2.0 + kt;
  const double c = kt * params.theta * denom;
  const double s = std::sqrt(a * a + c);
  // Both branches are the same root; the second avoids cancellation when the
  // shifted state a is negative.
  const double L = (a >= 0.0) ? (a + s) / denom : c / (denom * (s - a));
  if (!std::isfinite(L) || !(L > 0.0)) {
    throw NumericFailure("step_backward: root left the positive domain");
  }
  return {L, L * L, L * L};
}

// Explicit Lamperti step with truncated drift argument; raw L is returned as
// recursion state and the clamped square as the effective variance.
inline VarianceStepResult step_truncated(double L_n, double dW, double tau,
                                         const CirParams& params,
                                         const TruncationSpec& trunc) {
  if (!(tau > 0.0)) throw InvalidInput("step_truncated: tau must be positive");
  if (!std::isfinite(L_n) || !std::isfinite(dW)) {
    throw NumericFailure("step_truncated: non-finite input state");
  }
  const double floor_value = trunc.floor(tau);
  const double clamped = truncate_at_floor(L_n, floor_value);
  const double L = L_n + tau * phi(clamped, params) + 0.5 * params.gamma * dW;
  const double L_bar = truncate_at_floor(L, floor_value);
  return {L, L_bar * L_bar, L_bar * L_bar};
}

// Full-truncation Euler on the variance itself; the signed iterate is the
// recursion state, its positive part the output.
inline VarianceStepResult step_full_truncation_euler(double V_n, double dW,
                                                     double tau,
                                                     const CirParams& params) {
  if (!(tau > 0.0)) {
    throw InvalidInput("step_full_truncation_euler: tau must be positive");
  }
  if (!std::isfinite(V_n) || !std::isfinite(dW)) {
    throw NumericFailure("step_full_truncation_euler: non-finite input state");
  }
  const double v_plus = V_n > 0.0 ? V_n : 0.0;
  const double V =
      V_n + params.kappa * (params.theta - v_plus) * tau +
      params.gamma * std::sqrt(v_plus) * dW;
  const double v_eff = V > 0.0 ? V : 0.0;
  return {std::sqrt(v_eff), V, v_eff};
}

// Exact transition sampling through the scaled noncentral chi-square law.
inline VarianceStepResult step_exact(double V_n, double tau,
                                     const CirParams& params,
                                     RandomStream& stream) {
  if (!(tau > 0.0)) throw InvalidInput("step_exact: tau must be positive");
  if (!(V_n >= 0.0)) {
    throw InvalidInput("step_exact: variance state must be nonnegative");
  }
  const double decay = std::exp(-params.kappa * tau);
  const double c =
      params.gamma * params.gamma * (1.0 - decay) / (4.0 * params.kappa);
  const double d = 4.0 * params.kappa * params.theta /
                   (params.gamma * params.gamma);
  const double lambda = V_n * decay / c;
  const double V = c * sample_noncentral_chisq(stream, d, lambda);
  return {std::sqrt(V), V, V};
}

// Rolls one path's variance process over every grid step. The exact scheme
// draws from the path's private sampler stream; the discretized schemes
// consume the grid's variance-process increments.
inline std::vector<VarianceStepResult> simulate_variance_path(
    SchemeKind scheme, const CirParams& params, const TruncationSpec& trunc,
    const BrownianGrid& grid, std::int64_t path) {
  params.validate();
  const std::int64_t n = grid.n_steps();
  const double tau = grid.tau();
  std::vector<VarianceStepResult> out;
  out.reserve(static_cast<std::size_t>(n));
  double L = std::sqrt(params.v0);
  double V = params.v0;
  RandomStream exact_stream(
      grid.seed(), stream_domain::kVarianceSampler + static_cast<std::uint64_t>(path));
  for (std::int64_t m = 0; m < n; ++m) {
    VarianceStepResult step;
    switch (scheme) {
      case SchemeKind::BackwardLamperti:
        step = step_backward(L, grid.dw(path, m), tau, params);
        L = step.L_next;
        break;
      case SchemeKind::TruncatedLamperti:
        step = step_truncated(L, grid.dw(path, m), tau, params, trunc);
        L = step.L_next;
        break;
      case SchemeKind::FullTruncationEuler:
        step = step_full_truncation_euler(V, grid.dw(path, m), tau, params);
        V = step.V_next;
        break;
      case SchemeKind::ExactNcx2:
        step = step_exact(V, tau, params, exact_stream);
        V = step.V_next;
        break;
    }
    out.push_back(step);
  }
  return out;
}

}  // namespace hslv
