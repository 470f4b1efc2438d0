#pragma once

// Experiment drivers behind the command-line front end: market-surface
// export, pricing runs, error tables, order studies, binned conditional
// expectations, and parameter sweeps. All emitted files are deterministic
// byte-for-byte under a fixed seed and configuration (wall-clock comment
// lines can be disabled via run.timings for byte-level comparisons).

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hslv/binning.hpp"
#include "hslv/black_scholes.hpp"
#include "hslv/call_surface.hpp"
#include "hslv/config.hpp"
#include "hslv/convergence.hpp"
#include "hslv/cos_pricer.hpp"
#include "hslv/engine.hpp"
#include "hslv/errors.hpp"

namespace hslv {

struct CommandResult {
  std::vector<std::string> outputs;   // files written
  std::vector<std::string> notes;     // informational lines
  std::vector<std::string> failures;  // machine-readable failure list

  int exit_code() const { return failures.empty() ? 0 : 1; }
};

namespace detail {

inline void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw InvalidInput("cannot open '" + path + "' for writing");
  }
  os << body;
  if (!os) {
    throw InvalidInput("failed while writing '" + path + "'");
  }
}

inline std::string lower_label(SchemeKind scheme) {
  std::string label = scheme_label(scheme);
  for (char& c : label) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return label;
}

inline std::string fmt4(double value) {
  if (!std::isfinite(value)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", value);
  return buf;
}

inline std::string fmt17(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

inline long strike_pct(double strike) {
  return std::lround(100.0 * strike);
}

}  // namespace detail

// Calibration target surface: loaded from surface.path when set, otherwise
// generated from the market parameters on the default maturity/strike grids.
inline CallSurface experiment_surface(const ExperimentConfig& cfg) {
  if (!cfg.surface_path.empty()) {
    return load_call_surface(cfg.surface_path, cfg.market.s0, cfg.market.r);
  }
  return build_market_surface(cfg.market, default_surface_maturities(),
                              default_surface_strikes(cfg.market.s0),
                              cfg.cos);
}

// Reference prices of the configured strikes under the market dynamics.
inline std::vector<double> reference_prices(const ExperimentConfig& cfg) {
  std::vector<double> prices;
  prices.reserve(cfg.strikes.size());
  for (const double strike : cfg.strikes) {
    prices.push_back(cos_call_price(cfg.market, strike * cfg.market.s0,
                                    cfg.horizon, cfg.cos));
  }
  return prices;
}

struct CellError {
  double err_pct = 0.0;     // error against the market reference, in percent
  double stderr_pct = 0.0;  // Monte Carlo standard error on the same scale
};

struct SchemeRunErrors {
  std::vector<PriceEstimate> prices;  // one per strike
  std::vector<CellError> errors;      // one per strike
};

namespace detail {

inline CellError cell_error(const PriceEstimate& estimate,
                            double market_price, double strike_abs,
                            const HestonParams& market, double horizon,
                            ErrorMetric metric) {
  CellError cell;
  if (metric == ErrorMetric::kPrice) {
    cell.err_pct = 100.0 * std::fabs(estimate.mean - market_price) /
                   market_price;
    cell.stderr_pct = 100.0 * estimate.std_error / market_price;
    return cell;
  }
  const double market_iv =
      implied_vol(market_price, market.s0, strike_abs, horizon, market.r);
  const double model_iv =
      implied_vol(estimate.mean, market.s0, strike_abs, horizon, market.r);
  const double vega =
      bs_vega(market.s0, strike_abs, horizon, market.r, model_iv);
  cell.err_pct = 100.0 * std::fabs(model_iv - market_iv);
  cell.stderr_pct = 100.0 * estimate.std_error / vega;
  return cell;
}

}  // namespace detail

// Simulates one (scheme, step-count) cell and prices every configured
// strike from the single resulting ensemble. Pricing failures (for example
// an estimate outside the arbitrage bounds of the vol solver) are recorded
// in `failures` and leave a NaN error cell rather than aborting the run.
inline SchemeRunErrors run_cell(const ExperimentConfig& cfg,
                                const CallSurface& surface, SchemeKind scheme,
                                std::size_t n_steps,
                                const std::vector<double>& market_prices,
                                std::vector<std::string>* failures) {
  const SlvConfig sim = cfg.slv_config(scheme, n_steps);
  const PathEnsemble ens = simulate_hslv(sim, &surface);
  SchemeRunErrors out;
  for (std::size_t k = 0; k < cfg.strikes.size(); ++k) {
    const double strike_abs = cfg.strikes[k] * cfg.market.s0;
    const PriceEstimate estimate =
        price_call(ens, strike_abs, cfg.market.r, cfg.horizon);
    out.prices.push_back(estimate);
    try {
      out.errors.push_back(detail::cell_error(estimate, market_prices[k],
                                              strike_abs, cfg.market,
                                              cfg.horizon, cfg.error_metric));
    } catch (const std::exception& err) {
      if (failures != nullptr) {
        failures->push_back("cell " + scheme_label(scheme) + " N=" +
                            std::to_string(n_steps) + " K=" +
                            detail::fmt4(cfg.strikes[k]) + ": " + err.what());
      }
      const double nan = std::nan("");
      out.errors.push_back(CellError{nan, nan});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Subcommands.

// Writes the market call surface as `t,K,price` rows; rerunning with the
// same configuration reproduces the file byte for byte.
inline CommandResult cmd_market(const ExperimentConfig& cfg) {
  CommandResult res;
  try {
    cfg.market.validate();
    cfg.cos.validate();
    std::filesystem::create_directories(cfg.out_dir);
    const CallSurface surface = build_market_surface(
        cfg.market, default_surface_maturities(),
        default_surface_strikes(cfg.market.s0), cfg.cos);
    const std::string path = cfg.out_dir + "/market_surface.csv";
    std::ostringstream body;
    surface.save(body);
    detail::write_text_file(path, body.str());
    res.outputs.push_back(path);
    res.notes.push_back(
        "market surface: " +
        std::to_string(default_surface_maturities().size()) + " maturities x " +
        std::to_string(default_surface_strikes(cfg.market.s0).size()) +
        " strikes");
  } catch (const std::exception& err) {
    res.failures.push_back(std::string("market: ") + err.what());
  }
  return res;
}

// Prices the configured strikes once per scheme at sim.steps resolution and
// writes the raw estimates.
inline CommandResult cmd_simulate(const ExperimentConfig& cfg) {
  CommandResult res;
  try {
    cfg.validate();
    std::filesystem::create_directories(cfg.out_dir);
    const bool calibrated = cfg.sim_leverage == LeverageMode::kCalibrated;
    std::optional<CallSurface> surface;
    if (calibrated) surface.emplace(experiment_surface(cfg));
    std::string body = "scheme,strike,price,stderr\n";
    for (const SchemeKind scheme : cfg.schemes) {
      const SlvConfig sim =
          cfg.slv_config(scheme, cfg.sim_steps, cfg.sim_leverage);
      const PathEnsemble ens =
          simulate_hslv(sim, calibrated ? &*surface : nullptr);
      for (const double strike : cfg.strikes) {
        const PriceEstimate estimate = price_call(
            ens, strike * cfg.market.s0, cfg.market.r, cfg.horizon);
        body += scheme_label(scheme) + "," + detail::fmt17(strike) + "," +
                detail::fmt17(estimate.mean) + "," +
                detail::fmt17(estimate.std_error) + "\n";
      }
    }
    const std::string path = cfg.out_dir + "/simulate.csv";
    detail::write_text_file(path, body);
    res.outputs.push_back(path);
  } catch (const std::exception& err) {
    res.failures.push_back(std::string("simulate: ") + err.what());
  }
  return res;
}

// Error tables against the market reference: one file per strike with rows
// over (scheme, step count), 4-decimal fixed formatting, trend flags and
// optional per-scheme wall-clock comment lines appended.
inline CommandResult cmd_tables(const ExperimentConfig& cfg) {
  CommandResult res;
  try {
    cfg.validate();
    std::filesystem::create_directories(cfg.out_dir);
    const CallSurface surface = experiment_surface(cfg);
    const std::vector<double> market_prices = reference_prices(cfg);

    struct SchemeBlock {
      std::vector<SchemeRunErrors> runs;  // one per step count
      double seconds = 0.0;
    };
    std::vector<SchemeBlock> blocks;
    for (const SchemeKind scheme : cfg.schemes) {
      SchemeBlock block;
      const auto start = std::chrono::steady_clock::now();
      for (const std::size_t n_steps : cfg.steps) {
        block.runs.push_back(run_cell(cfg, surface, scheme, n_steps,
                                      market_prices, &res.failures));
      }
      block.seconds = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
      blocks.push_back(std::move(block));
    }

    // Coarsest-to-finest trend: flag any scheme whose error fails to
    // improve between the smallest and largest step count.
    std::vector<std::vector<std::string>> trend_flags(cfg.strikes.size());
    for (std::size_t k = 0; cfg.steps.size() > 1 && k < cfg.strikes.size();
         ++k) {
      for (std::size_t s = 0; s < cfg.schemes.size(); ++s) {
        const double first = blocks[s].runs.front().errors[k].err_pct;
        const double last = blocks[s].runs.back().errors[k].err_pct;
        if (!(last < first)) {
          const std::string flag =
              scheme_label(cfg.schemes[s]) + " err(N=" +
              std::to_string(cfg.steps.back()) + ") >= err(N=" +
              std::to_string(cfg.steps.front()) + ")";
          trend_flags[k].push_back(flag);
          res.notes.push_back("trend flag: K=" +
                              detail::fmt4(cfg.strikes[k]) + " " + flag);
        }
      }
    }

    for (std::size_t k = 0; k < cfg.strikes.size(); ++k) {
      std::string body = "scheme,N,K,err_pct,stderr_pct\n";
      for (std::size_t s = 0; s < cfg.schemes.size(); ++s) {
        for (std::size_t i = 0; i < cfg.steps.size(); ++i) {
          const CellError& cell = blocks[s].runs[i].errors[k];
          body += scheme_label(cfg.schemes[s]) + "," +
                  std::to_string(cfg.steps[i]) + "," +
                  detail::fmt4(cfg.strikes[k]) + "," +
                  detail::fmt4(cell.err_pct) + "," +
                  detail::fmt4(cell.stderr_pct) + "\n";
        }
      }
      for (const std::string& flag : trend_flags[k]) {
        body += "# trend: " + flag + "\n";
      }
      if (cfg.timings) {
        for (std::size_t s = 0; s < cfg.schemes.size(); ++s) {
          body += "# timing: " + scheme_label(cfg.schemes[s]) + " " +
                  detail::fmt4(blocks[s].seconds) + " seconds\n";
        }
      }
      const std::string path =
          cfg.out_dir + "/table_k" +
          std::to_string(detail::strike_pct(cfg.strikes[k])) + ".csv";
      detail::write_text_file(path, body);
      res.outputs.push_back(path);
    }
  } catch (const std::exception& err) {
    res.failures.push_back(std::string("tables: ") + err.what());
  }
  return res;
}

// Strong-order studies for the configured schemes; one file per scheme with
// per-level errors and a fitted-slope summary line.
inline CommandResult cmd_converge(const ExperimentConfig& cfg) {
  CommandResult res;
  try {
    cfg.validate();
    std::filesystem::create_directories(cfg.out_dir);
    for (const SchemeKind scheme : cfg.converge_schemes) {
      const ConvergenceStudy study =
          run_convergence_study(cfg.convergence_config(scheme));
      std::string body = "scheme,N,tau,l2_error,l1_error_V\n";
      for (const ConvergenceLevel& level : study.results) {
        body += scheme_label(scheme) + "," + std::to_string(level.steps) +
                "," + detail::fmt17(level.tau) + "," +
                detail::fmt17(level.l2_error) + "," +
                detail::fmt17(level.l1_error_V) + "\n";
      }
      for (const std::size_t excluded : study.fit.excluded_levels) {
        body += "# warning: level N=" + std::to_string(excluded) +
                " had zero error and was excluded from the fit\n";
      }
      body += "slope=" + detail::fmt17(study.fit.slope) + "\n";
      const std::string path =
          cfg.out_dir + "/converge_" + detail::lower_label(scheme) + ".csv";
      detail::write_text_file(path, body);
      res.outputs.push_back(path);
      res.notes.push_back("converge " + scheme_label(scheme) + ": slope " +
                          detail::fmt4(study.fit.slope));
    }
  } catch (const std::exception& err) {
    res.failures.push_back(std::string("converge: ") + err.what());
  }
  return res;
}

// Binned conditional-expectation curves E[V | S] at the requested steps for
// the configured schemes plus the exact-transition sampler as reference,
// simulated under the model dynamics with unit leverage.
inline CommandResult cmd_condexp(const ExperimentConfig& cfg) {
  CommandResult res;
  try {
    cfg.validate();
    std::filesystem::create_directories(cfg.out_dir);
    std::vector<SchemeKind> schemes = cfg.condexp_schemes;
    if (std::find(schemes.begin(), schemes.end(), SchemeKind::ExactNcx2) ==
        schemes.end()) {
      schemes.push_back(SchemeKind::ExactNcx2);
    }
    const std::size_t total_steps =
        *std::max_element(cfg.condexp_steps.begin(), cfg.condexp_steps.end());
    const std::set<std::size_t> requested(cfg.condexp_steps.begin(),
                                          cfg.condexp_steps.end());
    const BinSpec bins{cfg.condexp_bins};

    std::string body = "scheme,step,t,bin_lo,bin_hi,mean_v\n";
    for (const SchemeKind scheme : schemes) {
      ExperimentConfig run = cfg;
      run.paths = cfg.condexp_paths;
      SlvConfig sim = run.slv_config(scheme, total_steps,
                                     LeverageMode::kUnit);
      sim.horizon = cfg.condexp_tau * static_cast<double>(total_steps);

      auto append_curve = [&](const PathEnsemble& ens) {
        std::vector<double> spots(ens.size());
        for (std::size_t j = 0; j < ens.size(); ++j) {
          spots[j] = std::exp(ens.r[j]);
        }
        const ConditionalExpectation curve =
            estimate_conditional_expectation(spots, ens.v, bins);
        const double t = cfg.condexp_tau * static_cast<double>(ens.step);
        for (std::size_t b = 0; b < curve.n_bins(); ++b) {
          body += scheme_label(scheme) + "," + std::to_string(ens.step) +
                  "," + detail::fmt17(t) + "," +
                  detail::fmt17(curve.bin_edges()[b]) + "," +
                  detail::fmt17(curve.bin_edges()[b + 1]) + "," +
                  detail::fmt17(curve.bin_means()[b]) + "\n";
        }
      };

      const PathEnsemble final_ens = simulate_hslv(
          sim, nullptr,
          [&](const PathEnsemble& ens, double, const LeverageEvaluation*) {
            if (requested.count(ens.step) > 0) append_curve(ens);
          });
      if (requested.count(total_steps) > 0) append_curve(final_ens);
    }
    const std::string path = cfg.out_dir + "/condexp.csv";
    detail::write_text_file(path, body);
    res.outputs.push_back(path);
  } catch (const std::exception& err) {
    res.failures.push_back(std::string("condexp: ") + err.what());
  }
  return res;
}

// Error sweep across a market level (vbar) or model-modification (p) grid
// at a fixed step count; per-strike errors and their mean per scheme per
// grid value. Each vbar grid point rebuilds the market surface it calibrates
// against; the p sweep reuses the base market surface.
inline CommandResult cmd_sweep(const ExperimentConfig& cfg) {
  CommandResult res;
  try {
    cfg.validate();
    std::filesystem::create_directories(cfg.out_dir);
    const bool vbar = cfg.sweep_parameter == "vbar";
    const std::vector<double>& grid =
        vbar ? cfg.sweep_vbar_grid : cfg.sweep_p_grid;

    std::string body = "parameter,value,scheme";
    for (const double strike : cfg.strikes) {
      body += ",err_k" + std::to_string(detail::strike_pct(strike));
    }
    body += ",err_mean\n";

    std::optional<CallSurface> base_surface;
    if (!vbar) base_surface.emplace(experiment_surface(cfg));

    for (const double value : grid) {
      ExperimentConfig point = cfg;
      if (vbar) {
        point.market.cir.theta = value;
      } else {
        point.p = value;
      }
      point.validate();
      const CallSurface surface = vbar
          ? build_market_surface(point.market, default_surface_maturities(),
                                 default_surface_strikes(point.market.s0),
                                 point.cos)
          : *base_surface;
      const std::vector<double> market_prices = reference_prices(point);
      for (const SchemeKind scheme : cfg.schemes) {
        const SchemeRunErrors cell =
            run_cell(point, surface, scheme, cfg.sweep_steps, market_prices,
                     &res.failures);
        body += cfg.sweep_parameter + "," + detail::fmt4(value) + "," +
                scheme_label(scheme);
        double sum = 0.0;
        for (const CellError& err : cell.errors) {
          body += "," + detail::fmt4(err.err_pct);
          sum += err.err_pct;
        }
        body += "," +
                detail::fmt4(sum / static_cast<double>(cell.errors.size())) +
                "\n";
      }
    }
    const std::string path =
        cfg.out_dir + "/sweep_" + cfg.sweep_parameter + ".csv";
    detail::write_text_file(path, body);
    res.outputs.push_back(path);
  } catch (const std::exception& err) {
    res.failures.push_back(std::string("sweep: ") + err.what());
  }
  return res;
}

inline CommandResult run_command(const std::string& name,
                                 const ExperimentConfig& cfg) {
  if (name == "market") return cmd_market(cfg);
  if (name == "simulate") return cmd_simulate(cfg);
  if (name == "tables") return cmd_tables(cfg);
  if (name == "converge") return cmd_converge(cfg);
  if (name == "condexp") return cmd_condexp(cfg);
  if (name == "sweep") return cmd_sweep(cfg);
  CommandResult res;
  res.failures.push_back("unknown subcommand '" + name +
                         "' (expected market, simulate, tables, converge, "
                         "condexp, or sweep)");
  return res;
}

}  // namespace hslv
