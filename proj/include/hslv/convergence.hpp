#pragma once
// Strong-convergence study for the Brownian-driven variance schemes. Errors
// are measured pathwise against the same scheme on a dyadically refined
// grid whose increments aggregate exactly to every coarser level, so the
// difference at the horizon is discretization error alone. The fitted
// log-log slope estimates the strong order.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "hslv/brownian.hpp"
#include "hslv/errors.hpp"
#include "hslv/parallel.hpp"
#include "hslv/params.hpp"
#include "hslv/schemes.hpp"
#include "hslv/stats.hpp"

namespace hslv {

struct StrongError {
  double l2_L = 0.0;  // root-mean-square gap of sqrt(V_effective) at T
  double l1_V = 0.0;  // mean absolute gap of V_effective at T
};

namespace detail {

// Advances one variance path over `steps` equal steps whose increments are
// consecutive-sum aggregates of the base buffer, and returns the terminal
// effective variance. The recursion state follows each scheme's own rule:
// the raw iterate for the truncated scheme, the signed iterate for
// full-truncation Euler.
inline double terminal_effective_variance(SchemeKind scheme,
                                          const CirParams& params,
                                          const TruncationSpec& trunc,
                                          const std::vector<double>& base_dw,
                                          std::size_t steps, double horizon) {
  const std::size_t factor = base_dw.size() / steps;
  const double tau = horizon / static_cast<double>(steps);
  double state = (scheme == SchemeKind::FullTruncationEuler)
                     ? params.v0
                     : std::sqrt(params.v0);
  double v_eff = params.v0;
  for (std::size_t m = 0; m < steps; ++m) {
    double dw = 0.0;
    for (std::size_t j = 0; j < factor; ++j) {
      dw += base_dw[m * factor + j];
    }
    VarianceStepResult res;
    switch (scheme) {
      case SchemeKind::TruncatedLamperti:
        res = step_truncated(state, dw, tau, params, trunc);
        state = res.L_next;
        break;
      case SchemeKind::BackwardLamperti:
        res = step_backward(state, dw, tau, params);
        state = res.L_next;
        break;
      case SchemeKind::FullTruncationEuler:
        res = step_full_truncation_euler(state, dw, tau, params);
        state = res.V_next;
        break;
      case SchemeKind::ExactNcx2:
        throw InvalidInput(
            "strong_error: the exact transition sampler is not driven by a "
            "Brownian grid and cannot be coupled across levels");
    }
    v_eff = res.V_effective;
  }
  return v_eff;
}

inline void require_dyadic_ratio(std::size_t coarse, std::size_t fine,
                                 const char* what) {
  if (coarse < 1 || fine % coarse != 0) {
    throw InvalidInput(std::string(what) +
                       ": coarse level must divide the reference level");
  }
  std::size_t ratio = fine / coarse;
  while (ratio % 2 == 0) {
    ratio /= 2;
  }
  if (ratio != 1) {
    throw InvalidInput(std::string(what) +
                       ": level ratio must be a power of two");
  }
}

}  // namespace detail

// Pathwise strong error at the horizon between `level_steps` and the
// reference discretization carried by the grid, using identical Brownian
// increments on both levels.
inline StrongError strong_error(SchemeKind scheme, const CirParams& params,
                                const TruncationSpec& trunc,
                                const BrownianGrid& reference_grid,
                                std::size_t level_steps, int threads = 1) {
  params.validate();
  trunc.validate(params);
  const std::size_t ref_steps =
      static_cast<std::size_t>(reference_grid.n_steps());
  detail::require_dyadic_ratio(level_steps, ref_steps, "strong_error");
  const std::size_t m_paths =
      static_cast<std::size_t>(reference_grid.n_paths());

  std::vector<double> sq_gap_L(m_paths), abs_gap_V(m_paths);
  parallel_for(m_paths, threads, [&](std::size_t p) {
    thread_local std::vector<double> base;
    reference_grid.fill_base_dw(static_cast<std::int64_t>(p), base);
    const double v_level = detail::terminal_effective_variance(
        scheme, params, trunc, base, level_steps, reference_grid.horizon());
    const double v_ref = detail::terminal_effective_variance(
        scheme, params, trunc, base, ref_steps, reference_grid.horizon());
    const double gap_L = std::sqrt(v_level) - std::sqrt(v_ref);
    sq_gap_L[p] = gap_L * gap_L;
    abs_gap_V[p] = std::fabs(v_level - v_ref);
  });

  StrongError out;
  out.l2_L = std::sqrt(mean(sq_gap_L));
  out.l1_V = mean(abs_gap_V);
  return out;
}

struct ConvergenceLevel {
  std::size_t steps = 0;
  double tau = 0.0;
  double l2_error = 0.0;
  double l1_error_V = 0.0;
};

struct OrderFit {
  double slope = 0.0;
  double intercept = 0.0;
  // Levels whose error was exactly zero; they carry no log-log information
  // and are left out of the fit.
  std::vector<std::size_t> excluded_levels;
};

// Least-squares fit of log(error) against log(tau). Requires at least four
// levels up front and at least two usable ones after exclusions.
inline OrderFit fit_power_law(const std::vector<ConvergenceLevel>& levels) {
  if (levels.size() < 4) {
    throw InvalidInput("fit_power_law: need at least four levels");
  }
  OrderFit fit;
  std::vector<double> x, y;
  for (const ConvergenceLevel& lvl : levels) {
    if (lvl.l2_error > 0.0) {
      x.push_back(std::log(lvl.tau));
      y.push_back(std::log(lvl.l2_error));
    } else {
      fit.excluded_levels.push_back(lvl.steps);
    }
  }
  if (x.size() < 2) {
    throw InvalidInput(
        "fit_power_law: fewer than two levels with nonzero error");
  }
  fit.slope = least_squares_slope(x, y);
  fit.intercept = mean(y) - fit.slope * mean(x);
  return fit;
}

struct ConvergenceConfig {
  SchemeKind scheme = SchemeKind::TruncatedLamperti;
  CirParams params{2.0, 0.09, 0.3, 0.09};
  TruncationSpec trunc;  // b = 0 selects the parameter-based default
  std::vector<std::size_t> levels = {8, 16, 32, 64, 128, 256, 512};
  std::size_t reference_level = 4096;
  std::size_t paths = 10000;
  double horizon = 1.0;
  std::uint64_t seed = 0;
  int threads = 1;

  TruncationSpec effective_trunc() const {
    return trunc.b > 0.0 ? trunc : TruncationSpec::defaults_for(params);
  }

  void validate() const {
    params.validate();
    effective_trunc().validate(params);
    if (scheme == SchemeKind::ExactNcx2) {
      throw InvalidInput(
          "ConvergenceConfig: the exact sampler draws from the transition "
          "law directly and cannot be coupled across grids");
    }
    if (levels.empty()) {
      throw InvalidInput("ConvergenceConfig: need at least one level");
    }
    for (std::size_t i = 0; i < levels.size(); ++i) {
      if (levels[i] < 1) {
        throw InvalidInput("ConvergenceConfig: levels must be positive");
      }
      if (i > 0 && levels[i] <= levels[i - 1]) {
        throw InvalidInput(
            "ConvergenceConfig: levels must be strictly increasing");
      }
      detail::require_dyadic_ratio(levels[i], reference_level,
                                   "ConvergenceConfig");
    }
    if (reference_level < 4 * levels.back()) {
      throw InvalidInput(
          "ConvergenceConfig: reference level must be at least four times "
          "the finest tested level");
    }
    if (paths < 1) {
      throw InvalidInput("ConvergenceConfig: need at least one path");
    }
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
      throw InvalidInput(
          "ConvergenceConfig: horizon must be positive and finite");
    }
    if (threads < 1) {
      throw InvalidInput("ConvergenceConfig: need at least one thread");
    }
  }
};

struct ConvergenceStudy {
  ConvergenceConfig config;
  std::vector<ConvergenceLevel> results;
  OrderFit fit;
};

inline ConvergenceStudy run_convergence_study(const ConvergenceConfig& cfg) {
  cfg.validate();
  ConvergenceStudy study;
  study.config = cfg;
  const TruncationSpec trunc = cfg.effective_trunc();
  const BrownianGrid grid(cfg.seed, cfg.horizon,
                          static_cast<std::int64_t>(cfg.reference_level),
                          static_cast<std::int64_t>(cfg.paths));
  // One base-buffer fill and one reference solve per path serve every level.
  const std::size_t n_levels = cfg.levels.size();
  std::vector<std::vector<double>> sq_gap_L(n_levels,
                                            std::vector<double>(cfg.paths));
  std::vector<std::vector<double>> abs_gap_V(n_levels,
                                             std::vector<double>(cfg.paths));
  parallel_for(cfg.paths, cfg.threads, [&](std::size_t p) {
    thread_local std::vector<double> base;
    grid.fill_base_dw(static_cast<std::int64_t>(p), base);
    const double v_ref = detail::terminal_effective_variance(
        cfg.scheme, cfg.params, trunc, base, cfg.reference_level,
        cfg.horizon);
    for (std::size_t k = 0; k < n_levels; ++k) {
      const double v_level = detail::terminal_effective_variance(
          cfg.scheme, cfg.params, trunc, base, cfg.levels[k], cfg.horizon);
      const double gap_L = std::sqrt(v_level) - std::sqrt(v_ref);
      sq_gap_L[k][p] = gap_L * gap_L;
      abs_gap_V[k][p] = std::fabs(v_level - v_ref);
    }
  });
  for (std::size_t k = 0; k < n_levels; ++k) {
    ConvergenceLevel lvl;
    lvl.steps = cfg.levels[k];
    lvl.tau = cfg.horizon / static_cast<double>(cfg.levels[k]);
    lvl.l2_error = std::sqrt(mean(sq_gap_L[k]));
    lvl.l1_error_V = mean(abs_gap_V[k]);
    study.results.push_back(lvl);
  }
  study.fit = fit_power_law(study.results);
  return study;
}

inline OrderFit estimate_order(const ConvergenceStudy& study) {
  return fit_power_law(study.results);
}

}  // namespace hslv
