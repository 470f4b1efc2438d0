#pragma once
// Step-synchronous Monte Carlo engine for the Heston stochastic-local-
// volatility model. Each time step first calibrates the leverage from the
// current path cross-section, then advances every path's variance with the
// configured scheme and its log-asset with the mixed Euler step. Results are
// bit-reproducible for a fixed (seed, config) regardless of the thread count:
// every path owns counter-based noise streams addressed by (seed, stream id,
// draw index), and reductions run serially in path order.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "hslv/call_surface.hpp"
#include "hslv/dupire.hpp"
#include "hslv/errors.hpp"
#include "hslv/leverage.hpp"
#include "hslv/parallel.hpp"
#include "hslv/params.hpp"
#include "hslv/rng.hpp"
#include "hslv/schemes.hpp"
#include "hslv/stats.hpp"

namespace hslv {

enum class LeverageMode {
  kCalibrated,  // sigma_hat^2 from the market surface and binned E[V|S]
  kUnit,        // sigma_hat = 1: plain Heston dynamics under the model params
  kZero,        // sigma_hat = 0: deterministic discounted-forward paths
};

inline std::string leverage_mode_label(LeverageMode mode) {
  switch (mode) {
    case LeverageMode::kCalibrated: return "calibrated";
    case LeverageMode::kUnit: return "unit";
    case LeverageMode::kZero: return "zero";
  }
  throw InvalidInput("leverage_mode_label: unknown mode");
}

inline LeverageMode parse_leverage_mode(const std::string& name) {
  if (name == "calibrated") return LeverageMode::kCalibrated;
  if (name == "unit") return LeverageMode::kUnit;
  if (name == "zero") return LeverageMode::kZero;
  throw InvalidInput("parse_leverage_mode: unknown mode '" + name + "'");
}

struct SlvConfig {
  HestonParams market;  // generator of the calibration target surface
  HestonParams model;   // dynamics actually simulated
  double p = 0.0;       // modification parameter behind derive_model()
  SchemeKind scheme = SchemeKind::TruncatedLamperti;
  std::size_t paths = 10000;
  std::size_t steps = 100;
  double horizon = 1.0;
  std::vector<double> strikes = {0.7, 1.0, 1.5};
  std::uint64_t seed = 0;
  int threads = 1;
  LeverageMode leverage_mode = LeverageMode::kCalibrated;
  DupireConfig dupire;
  LeverageSpec leverage;
  TruncationSpec trunc;  // b = 0 selects the model-based default

  void derive_model() { model = derive_model_params(market, p); }

  TruncationSpec effective_trunc() const {
    return trunc.b > 0.0 ? trunc
                         : TruncationSpec::defaults_for(model.cir);
  }

  void validate() const {
    market.validate();
    model.validate();
    if (paths < 100) {
      throw InvalidInput("SlvConfig: need at least 100 paths");
    }
    if (steps < 1) {
      throw InvalidInput("SlvConfig: need at least one step");
    }
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
      throw InvalidInput("SlvConfig: horizon must be positive and finite");
    }
    for (const double k : strikes) {
      if (!(k > 0.0) || !std::isfinite(k)) {
        throw InvalidInput("SlvConfig: strikes must be positive and finite");
      }
    }
    if (threads < 1) {
      throw InvalidInput("SlvConfig: thread count must be at least 1");
    }
    dupire.validate();
    leverage.validate();
    effective_trunc().validate(model.cir);
  }
};

// Cross-section of all paths at one time step. The staged v_next column lets
// the asset update read both endpoints of the variance increment before the
// recursion state rolls forward.
struct PathEnsemble {
  std::vector<double> r;       // log-asset values at the current step
  std::vector<double> v;       // effective (nonnegative) variance values
  std::vector<double> v_next;  // staged effective variance for the next step
  std::vector<double> state;   // scheme recursion state (Lamperti L, or the
                               // signed/exact variance iterate)
  std::size_t step = 0;

  std::size_t size() const { return r.size(); }
};

struct PriceEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // zero when fewer than two paths
  std::size_t paths = 0;
};

// Mean-reversion level to use inside the asset step's Brownian-substitution
// bracket. The bracket replaces gamma * int sqrt(V) dW with
// V_{i+1} - V_i - kappa*theta*tau + kappa*tau*V_i, which is centered for a
// variance scheme whose one-step increment has conditional mean
// kappa*(theta - V)*tau. The Lamperti schemes recurse in L = sqrt(V), and
// squaring their update adds (gamma/2 * dW)^2 to the V-increment — an extra
// gamma^2*tau/4 in expectation — so their bracket must compensate at the
// shifted level theta + gamma^2/(4*kappa) or the asset drift inherits a
// per-step bias that does not vanish with refinement.
inline double substitution_theta(SchemeKind scheme, const CirParams& cir) {
  switch (scheme) {
    case SchemeKind::TruncatedLamperti:
    case SchemeKind::BackwardLamperti:
      return cir.theta + cir.gamma * cir.gamma / (4.0 * cir.kappa);
    case SchemeKind::FullTruncationEuler:
    case SchemeKind::ExactNcx2:
      return cir.theta;
  }
  throw InvalidInput("substitution_theta: unknown scheme");
}

// One mixed log-Euler asset update. The variance increment of the driving
// Brownian motion is substituted out via the variance scheme's own update, so
// v_i and v_ip1 must be the effective variances bracketing this step, taken
// from the same scheme output that continues the variance path.
inline double advance_asset(double r_i, double v_i, double v_ip1,
                            double sigma_hat, double tau, double z,
                            const HestonParams& params) {
  if (!(v_i >= 0.0)) {
    throw InvalidInput("advance_asset: variance must be nonnegative");
  }
  const CirParams& cir = params.cir;
  const double sig_sq_v = sigma_hat * sigma_hat * v_i;
  const double drift = params.r * tau - 0.5 * tau * sig_sq_v;
  const double mixing =
      (params.rho / cir.gamma) * sigma_hat *
      (v_ip1 - v_i - cir.kappa * cir.theta * tau + cir.kappa * tau * v_i);
  const double diffusion =
      std::sqrt((1.0 - params.rho * params.rho) * tau * sig_sq_v) * z;
  return r_i + drift + mixing + diffusion;
}

// Observer invoked once per step after the leverage evaluation and before the
// paths advance; it sees the ensemble at time t. The evaluation pointer is
// null unless the engine runs in calibrated mode.
using StepObserver = std::function<void(const PathEnsemble&, double t,
                                        const LeverageEvaluation*)>;

namespace detail {

inline void throw_path_diagnostics(const char* what, std::size_t path,
                                   std::size_t step) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%s (path %zu, step %zu)", what, path,
                step);
  throw NumericFailure(buf);
}

}  // namespace detail

// Runs the full simulation and returns the terminal ensemble. The surface is
// required in calibrated mode and ignored otherwise.
inline PathEnsemble simulate_hslv(const SlvConfig& cfg,
                                  const CallSurface* surface = nullptr,
                                  const StepObserver& observer = {}) {
  cfg.validate();
  const bool calibrated = cfg.leverage_mode == LeverageMode::kCalibrated;
  if (calibrated && surface == nullptr) {
    throw InvalidInput("simulate_hslv: calibrated leverage needs a market surface");
  }
  const HestonParams& model = cfg.model;
  const CirParams& cir = model.cir;
  HestonParams asset_params = model;
  asset_params.cir.theta = substitution_theta(cfg.scheme, cir);
  const TruncationSpec trunc = cfg.effective_trunc();
  const std::size_t m = cfg.paths;
  const std::size_t n = cfg.steps;
  const double tau = cfg.horizon / static_cast<double>(n);
  const double sqrt_tau = std::sqrt(tau);
  const double log_s0 = std::log(model.s0);

  PathEnsemble ens;
  ens.r.assign(m, log_s0);
  ens.v.assign(m, cir.v0);
  ens.v_next.assign(m, 0.0);
  const double initial_state =
      (cfg.scheme == SchemeKind::TruncatedLamperti ||
       cfg.scheme == SchemeKind::BackwardLamperti)
          ? std::sqrt(cir.v0)
          : cir.v0;
  ens.state.assign(m, initial_state);
  // The exact scheme consumes a data-dependent number of draws per step, so
  // each path's sampler position persists across steps.
  std::vector<std::uint64_t> sampler_counters(
      cfg.scheme == SchemeKind::ExactNcx2 ? m : 0, 0);

  std::vector<double> sigma_hat(m, 0.0);
  std::vector<double> spot;
  const double unit_sigma =
      cfg.leverage_mode == LeverageMode::kUnit ? 1.0 : 0.0;
  // The calibration's finite-difference window in time never resolves finer
  // than the simulation grid itself: on a coarse grid the leverage is a
  // step-averaged quantity, so the local-variance read uses a bump of at
  // least half a step.
  DupireConfig run_dupire = cfg.dupire;
  run_dupire.dt_bump = std::max(run_dupire.dt_bump, 0.5 * tau);

  for (std::size_t i = 0; i < n; ++i) {
    ens.step = i;
    const double t = static_cast<double>(i) * tau;

    LeverageEvaluation eval;
    if (calibrated) {
      spot.resize(m);
      for (std::size_t j = 0; j < m; ++j) {
        spot[j] = std::exp(ens.r[j]);
      }
      eval = leverage_squared(*surface, t, spot, ens.v, run_dupire,
                              cfg.leverage);
      for (std::size_t j = 0; j < m; ++j) {
        sigma_hat[j] = std::sqrt(eval.sigma_hat_sq[j]);
      }
    } else {
      std::fill(sigma_hat.begin(), sigma_hat.end(), unit_sigma);
    }
    if (observer) {
      observer(ens, t, calibrated ? &eval : nullptr);
    }

    parallel_for(m, cfg.threads, [&](std::size_t j) {
      VarianceStepResult step_result;
      switch (cfg.scheme) {
        case SchemeKind::TruncatedLamperti: {
          const double dw =
              sqrt_tau * normal_icdf(RandomStream(cfg.seed,
                                                  stream_domain::kGridW + j)
                                         .uniform_at(i));
          step_result = step_truncated(ens.state[j], dw, tau, cir, trunc);
          ens.state[j] = step_result.L_next;
          break;
        }
        case SchemeKind::BackwardLamperti: {
          const double dw =
              sqrt_tau * normal_icdf(RandomStream(cfg.seed,
                                                  stream_domain::kGridW + j)
                                         .uniform_at(i));
          step_result = step_backward(ens.state[j], dw, tau, cir);
          ens.state[j] = step_result.L_next;
          break;
        }
        case SchemeKind::FullTruncationEuler: {
          const double dw =
              sqrt_tau * normal_icdf(RandomStream(cfg.seed,
                                                  stream_domain::kGridW + j)
                                         .uniform_at(i));
          step_result = step_full_truncation_euler(ens.state[j], dw, tau, cir);
          ens.state[j] = step_result.V_next;
          break;
        }
        case SchemeKind::ExactNcx2: {
          RandomStream sampler(cfg.seed, stream_domain::kVarianceSampler + j,
                               sampler_counters[j]);
          step_result = step_exact(ens.state[j], tau, cir, sampler);
          sampler_counters[j] = sampler.counter();
          ens.state[j] = step_result.V_next;
          break;
        }
      }
      ens.v_next[j] = step_result.V_effective;

      const double z =
          normal_icdf(RandomStream(cfg.seed, stream_domain::kGridWTilde + j)
                          .uniform_at(i));
      ens.r[j] = advance_asset(ens.r[j], ens.v[j], ens.v_next[j],
                               sigma_hat[j], tau, z, asset_params);
      if (!std::isfinite(ens.r[j]) || !std::isfinite(ens.v_next[j])) {
        detail::throw_path_diagnostics("simulate_hslv: non-finite path state",
                                       j, i);
      }
    });
    ens.v.swap(ens.v_next);
    ens.step = i + 1;
  }
  return ens;
}

// Discounted Monte Carlo call price with the standard error of the mean,
// reduced serially in path order.
inline PriceEstimate price_call(const PathEnsemble& ensemble, double strike,
                                double r, double horizon) {
  if (ensemble.size() == 0) {
    throw InvalidInput("price_call: empty ensemble");
  }
  if (!(strike >= 0.0) || !std::isfinite(strike)) {
    throw InvalidInput("price_call: strike must be nonnegative and finite");
  }
  if (!(horizon >= 0.0) || !std::isfinite(horizon) || !std::isfinite(r)) {
    throw InvalidInput("price_call: rate and horizon must be finite, horizon nonnegative");
  }
  const double discount = std::exp(-r * horizon);
  std::vector<double> payoff(ensemble.size());
  for (std::size_t j = 0; j < ensemble.size(); ++j) {
    payoff[j] = std::max(std::exp(ensemble.r[j]) - strike, 0.0);
  }
  const MeanWithError stats = mean_with_error(payoff);
  PriceEstimate out;
  out.mean = discount * stats.mean;
  out.std_error = discount * stats.std_error;
  out.paths = stats.count;
  return out;
}

}  // namespace hslv
