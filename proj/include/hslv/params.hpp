#pragma once

// Model parameter bundles: the square-root variance process, the full
// stochastic-volatility model around it, the truncation floor used by the
// explicit Lamperti scheme, and the mis-specification map that derives the
// simulated model's parameters from the market's.

#include <cmath>
#include <string>

#include "hslv/errors.hpp"

namespace hslv {

// Parameters of the mean-reverting square-root (CIR) variance process
//   dV = kappa (theta - V) dt + gamma sqrt(V) dW.
struct CirParams {
  double kappa = 0.0;  // mean-reversion rate (1/year)
  double theta = 0.0;  // long-run variance level
  double gamma = 0.0;  // volatility of variance
  double v0 = 0.0;     // initial variance

  void validate() const {
    if (!(kappa > 0.0) || !std::isfinite(kappa)) {
      throw InvalidInput("CirParams: kappa must be positive");
    }
    if (!(theta > 0.0) || !std::isfinite(theta)) {
      throw InvalidInput("CirParams: theta must be positive");
    }
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
      throw InvalidInput("CirParams: gamma must be positive");
    }
    if (!(v0 > 0.0) || !std::isfinite(v0)) {
      throw InvalidInput("CirParams: v0 must be positive");
    }
  }

  // Diagnostic only: 2 kappa theta >= gamma^2 keeps the exact process away
  // from zero. Violations are expected and never treated as errors.
  bool feller_satisfied() const { return 2.0 * kappa * theta >= gamma * gamma; }
};

// Full model: CIR variance plus correlation, rate, and spot.
struct HestonParams {
  CirParams cir;
  double rho = 0.0;  // correlation between variance and asset drivers
  double r = 0.0;    // risk-free rate
  double s0 = 1.0;   // initial spot

  void validate() const {
    cir.validate();
    if (!(std::fabs(rho) < 1.0)) {
      throw InvalidInput("HestonParams: |rho| must be below 1");
    }
    if (!(s0 > 0.0) || !std::isfinite(s0)) {
      throw InvalidInput("HestonParams: s0 must be positive");
    }
    if (!std::isfinite(r)) {
      throw InvalidInput("HestonParams: r must be finite");
    }
  }
};

// Truncation base for the explicit Lamperti scheme. The running floor is
// b * tau^(1/4); b itself never depends on the step size and may not exceed
// the initial Lamperti value sqrt(v0). The default sits well below that
// bound: a high floor pins a visible fraction of paths, and while the
// iterate is pinned its variance increment is frozen, which feeds a
// deterministic bias into the correlated part of the asset step.
struct TruncationSpec {
  double b = 0.0;

  static TruncationSpec defaults_for(const CirParams& cir) {
    return TruncationSpec{0.25 * std::sqrt(cir.v0)};
  }

  void validate(const CirParams& cir) const {
    if (!(b > 0.0) || !std::isfinite(b)) {
      throw InvalidInput("TruncationSpec: b must be positive");
    }
    if (b > std::sqrt(cir.v0) * (1.0 + 1e-12)) {
      throw InvalidInput("TruncationSpec: b must not exceed sqrt(v0)");
    }
  }

  double floor(double tau) const { return b * std::pow(tau, 0.25); }
};

// Mis-specification map: scales the market parameters by the modification
// parameter p to produce the simulated model's parameters. Spot and rate are
// unchanged.
inline HestonParams derive_model_params(const HestonParams& market, double p) {
  if (!std::isfinite(p)) {
    throw InvalidInput("derive_model_params: p must be finite");
  }
  HestonParams model = market;
  model.cir.gamma = (1.0 - p) * market.cir.gamma;
  model.cir.kappa = (1.0 + p) * market.cir.kappa;
  model.rho = (1.0 + p) * market.rho;
  model.cir.theta = (1.0 - p) * market.cir.theta;
  model.cir.v0 = (1.0 + p) * market.cir.v0;
  if (!(std::fabs(model.rho) < 1.0)) {
    throw InvalidInput("derive_model_params: |(1+p) rho| must stay below 1");
  }
  model.validate();
  return model;
}

}  // namespace hslv
