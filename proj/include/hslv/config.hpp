#pragma once

// Experiment configuration shared by the command-line front end: a flat
// `key = value` text format with dotted section prefixes and `#` comments.
// Every key in the registry has a default, can appear in a config file, and
// can be overridden on the command line as `--key value`; assignments to
// keys outside the registry are rejected.

#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hslv/convergence.hpp"
#include "hslv/cos_pricer.hpp"
#include "hslv/engine.hpp"
#include "hslv/errors.hpp"
#include "hslv/params.hpp"
#include "hslv/schemes.hpp"

namespace hslv {

enum class ErrorMetric { kImpliedVol, kPrice };

inline std::string error_metric_label(ErrorMetric metric) {
  switch (metric) {
    case ErrorMetric::kImpliedVol: return "iv";
    case ErrorMetric::kPrice: return "price";
  }
  throw InvalidInput("error_metric_label: unknown metric");
}

inline ErrorMetric parse_error_metric(const std::string& name) {
  if (name == "iv") return ErrorMetric::kImpliedVol;
  if (name == "price") return ErrorMetric::kPrice;
  throw InvalidInput("parse_error_metric: expected 'iv' or 'price', got '" +
                     name + "'");
}

struct ExperimentConfig {
  // Calibration target generator.
  HestonParams market{{1.05, 0.0855, 0.95, 0.0945}, -0.315, 0.0, 1.0};
  // Simulated dynamics: market parameters modified by p when present,
  // identical to the market when absent.
  std::optional<double> p = 0.25;

  // Shared run controls.
  std::vector<SchemeKind> schemes = {
      SchemeKind::FullTruncationEuler, SchemeKind::ExactNcx2,
      SchemeKind::TruncatedLamperti, SchemeKind::BackwardLamperti};
  std::size_t paths = 10000;
  std::vector<std::size_t> steps = {5, 10, 25, 40};
  std::vector<double> strikes = {0.7, 1.0, 1.5};
  double horizon = 5.0;
  std::uint64_t seed = 4;
  int threads = 1;
  ErrorMetric error_metric = ErrorMetric::kImpliedVol;
  std::string out_dir = "out";
  bool timings = true;
  std::string surface_path;  // empty: build the surface in-process

  // Guards and numerical controls. The series-truncation check stays off
  // here: surface generation touches deep-in-the-money nodes whose defect
  // sits harmlessly above the strict default tolerance, and the warnings
  // would drown the command output.
  CosConfig cos{512, 16.0, false, 1e-10};
  DupireConfig dupire;
  LeverageSpec leverage;
  double trunc_b = 0.0;  // 0 selects the model-based default

  // `simulate` subcommand.
  std::size_t sim_steps = 250;
  LeverageMode sim_leverage = LeverageMode::kCalibrated;

  // `converge` subcommand.
  std::vector<SchemeKind> converge_schemes = {SchemeKind::TruncatedLamperti,
                                              SchemeKind::BackwardLamperti};
  CirParams converge_params{2.0, 0.09, 0.3, 0.09};
  double converge_horizon = 1.0;
  std::vector<std::size_t> converge_levels = {8, 16, 32, 64, 128, 256, 512};
  std::size_t converge_reference = 4096;
  std::size_t converge_paths = 10000;

  // `condexp` subcommand.
  double condexp_tau = 0.001;
  std::size_t condexp_paths = 10000;
  int condexp_bins = 20;
  std::vector<std::size_t> condexp_steps = {250, 500, 1000};
  std::vector<SchemeKind> condexp_schemes = {SchemeKind::TruncatedLamperti,
                                             SchemeKind::BackwardLamperti};

  // `sweep` subcommand.
  std::string sweep_parameter = "p";
  std::vector<double> sweep_vbar_grid = {0.0855, 0.17, 0.34};
  std::vector<double> sweep_p_grid = {0.1, 0.25, 0.4};
  std::size_t sweep_steps = 25;

  HestonParams model_params() const {
    return p ? derive_model_params(market, *p) : market;
  }

  // Assembles the engine configuration for one (scheme, step-count) cell.
  SlvConfig slv_config(SchemeKind scheme, std::size_t n_steps,
                       LeverageMode mode = LeverageMode::kCalibrated) const {
    SlvConfig cfg;
    cfg.market = market;
    cfg.p = p.value_or(0.0);
    cfg.derive_model();
    cfg.scheme = scheme;
    cfg.paths = paths;
    cfg.steps = n_steps;
    cfg.horizon = horizon;
    cfg.strikes = strikes;
    cfg.seed = seed;
    cfg.threads = threads;
    cfg.leverage_mode = mode;
    cfg.dupire = dupire;
    cfg.leverage = leverage;
    cfg.trunc = TruncationSpec{trunc_b};
    return cfg;
  }

  ConvergenceConfig convergence_config(SchemeKind scheme) const {
    ConvergenceConfig cfg;
    cfg.scheme = scheme;
    cfg.params = converge_params;
    cfg.levels = converge_levels;
    cfg.reference_level = converge_reference;
    cfg.paths = converge_paths;
    cfg.horizon = converge_horizon;
    cfg.seed = seed;
    cfg.threads = threads;
    return cfg;
  }

  void validate() const {
    market.validate();
    if (p && !(*p > -1.0 && *p < 1.0)) {
      throw InvalidInput(
          "ExperimentConfig: model.p must lie in (-1, 1) so the modified "
          "parameters stay positive");
    }
    model_params().validate();
    if (schemes.empty()) {
      throw InvalidInput("ExperimentConfig: run.schemes must not be empty");
    }
    if (steps.empty()) {
      throw InvalidInput("ExperimentConfig: run.steps must not be empty");
    }
    for (const std::size_t n : steps) {
      if (n < 1) {
        throw InvalidInput("ExperimentConfig: run.steps entries must be >= 1");
      }
    }
    if (strikes.empty()) {
      throw InvalidInput("ExperimentConfig: run.strikes must not be empty");
    }
    if (out_dir.empty()) {
      throw InvalidInput("ExperimentConfig: run.out must not be empty");
    }
    if (sim_steps < 1) {
      throw InvalidInput("ExperimentConfig: sim.steps must be >= 1");
    }
    slv_config(schemes.front(), steps.front()).validate();
    cos.validate();
    if (converge_schemes.empty()) {
      throw InvalidInput(
          "ExperimentConfig: converge.schemes must not be empty");
    }
    for (const SchemeKind scheme : converge_schemes) {
      convergence_config(scheme).validate();
    }
    if (!(condexp_tau > 0.0)) {
      throw InvalidInput("ExperimentConfig: condexp.tau must be positive");
    }
    if (condexp_paths < 100) {
      throw InvalidInput("ExperimentConfig: condexp.paths must be >= 100");
    }
    BinSpec{condexp_bins}.validate();
    if (condexp_steps.empty() || condexp_schemes.empty()) {
      throw InvalidInput(
          "ExperimentConfig: condexp.steps and condexp.schemes must not be "
          "empty");
    }
    for (const std::size_t s : condexp_steps) {
      if (s < 1) {
        throw InvalidInput(
            "ExperimentConfig: condexp.steps entries must be >= 1");
      }
    }
    if (sweep_parameter != "vbar" && sweep_parameter != "p") {
      throw InvalidInput(
          "ExperimentConfig: sweep.parameter must be 'vbar' or 'p'");
    }
    if (sweep_vbar_grid.empty() || sweep_p_grid.empty()) {
      throw InvalidInput("ExperimentConfig: sweep grids must not be empty");
    }
    for (const double v : sweep_vbar_grid) {
      if (!(v > 0.0)) {
        throw InvalidInput(
            "ExperimentConfig: sweep.vbar_grid entries must be positive");
      }
    }
    for (const double q : sweep_p_grid) {
      if (!(q > -1.0 && q < 1.0)) {
        throw InvalidInput(
            "ExperimentConfig: sweep.p_grid entries must lie in (-1, 1)");
      }
    }
    if (sweep_steps < 1) {
      throw InvalidInput("ExperimentConfig: sweep.steps must be >= 1");
    }
  }
};

namespace detail {

inline std::string trim(const std::string& text) {
  const std::size_t first = text.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const std::size_t last = text.find_last_not_of(" \t\r");
  return text.substr(first, last - first + 1);
}

inline double parse_config_double(const std::string& key,
                                  const std::string& value) {
  try {
    std::size_t consumed = 0;
    const double parsed = std::stod(value, &consumed);
    if (consumed != value.size()) throw std::invalid_argument(value);
    return parsed;
  } catch (const std::exception&) {
    throw InvalidInput("config: key '" + key + "' expects a number, got '" +
                       value + "'");
  }
}

inline std::uint64_t parse_config_u64(const std::string& key,
                                      const std::string& value) {
  try {
    if (!value.empty() && value[0] == '-') throw std::invalid_argument(value);
    std::size_t consumed = 0;
    const unsigned long long parsed = std::stoull(value, &consumed);
    if (consumed != value.size()) throw std::invalid_argument(value);
    return static_cast<std::uint64_t>(parsed);
  } catch (const std::exception&) {
    throw InvalidInput("config: key '" + key +
                       "' expects a nonnegative integer, got '" + value + "'");
  }
}

inline int parse_config_int(const std::string& key, const std::string& value) {
  try {
    std::size_t consumed = 0;
    const long parsed = std::stol(value, &consumed);
    if (consumed != value.size()) throw std::invalid_argument(value);
    return static_cast<int>(parsed);
  } catch (const std::exception&) {
    throw InvalidInput("config: key '" + key + "' expects an integer, got '" +
                       value + "'");
  }
}

inline bool parse_config_bool(const std::string& key,
                              const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw InvalidInput("config: key '" + key +
                     "' expects true/false/1/0, got '" + value + "'");
}

inline std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::istringstream is(value);
  std::string item;
  while (is >> item) items.push_back(item);
  return items;
}

inline std::vector<double> parse_config_double_list(const std::string& key,
                                                    const std::string& value) {
  std::vector<double> parsed;
  for (const std::string& item : split_list(value)) {
    parsed.push_back(parse_config_double(key, item));
  }
  if (parsed.empty()) {
    throw InvalidInput("config: key '" + key + "' expects a nonempty list");
  }
  return parsed;
}

inline std::vector<std::size_t> parse_config_size_list(
    const std::string& key, const std::string& value) {
  std::vector<std::size_t> parsed;
  for (const std::string& item : split_list(value)) {
    parsed.push_back(static_cast<std::size_t>(parse_config_u64(key, item)));
  }
  if (parsed.empty()) {
    throw InvalidInput("config: key '" + key + "' expects a nonempty list");
  }
  return parsed;
}

inline std::vector<SchemeKind> parse_config_scheme_list(
    const std::string& key, const std::string& value) {
  std::vector<SchemeKind> parsed;
  for (const std::string& item : split_list(value)) {
    try {
      parsed.push_back(parse_scheme(item));
    } catch (const InvalidInput&) {
      throw InvalidInput("config: key '" + key +
                         "' expects scheme names (Euler, AES, Truncated, "
                         "Backward), got '" +
                         item + "'");
    }
  }
  if (parsed.empty()) {
    throw InvalidInput("config: key '" + key + "' expects a nonempty list");
  }
  return parsed;
}

inline std::string format_g17(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

template <typename T, typename Format>
std::string format_list(const std::vector<T>& items, Format format) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ' ';
    out += format(items[i]);
  }
  return out;
}

}  // namespace detail

// One registry entry per configuration key: how to assign a textual value
// into the config and how to render the current value back out.
struct ConfigKey {
  std::string name;
  std::string doc;
  std::function<void(ExperimentConfig&, const std::string&)> apply;
  std::function<std::string(const ExperimentConfig&)> render;
};

inline const std::vector<ConfigKey>& config_registry() {
  static const std::vector<ConfigKey> registry = [] {
    std::vector<ConfigKey> keys;
    // Each accessor is a generic lambda returning a reference to the target
    // field, so the same accessor serves both assignment and rendering.
    auto add_double = [&](const std::string& name, const std::string& doc,
                          auto access) {
      keys.push_back(ConfigKey{
          name, doc,
          [access, name](ExperimentConfig& cfg, const std::string& value) {
            access(cfg) = detail::parse_config_double(name, value);
          },
          [access](const ExperimentConfig& cfg) {
            return detail::format_g17(access(cfg));
          }});
    };
    auto add_size = [&](const std::string& name, const std::string& doc,
                        auto access) {
      keys.push_back(ConfigKey{
          name, doc,
          [access, name](ExperimentConfig& cfg, const std::string& value) {
            access(cfg) =
                static_cast<std::size_t>(detail::parse_config_u64(name, value));
          },
          [access](const ExperimentConfig& cfg) {
            return std::to_string(access(cfg));
          }});
    };
    auto add_int = [&](const std::string& name, const std::string& doc,
                       auto access) {
      keys.push_back(ConfigKey{
          name, doc,
          [access, name](ExperimentConfig& cfg, const std::string& value) {
            access(cfg) = detail::parse_config_int(name, value);
          },
          [access](const ExperimentConfig& cfg) {
            return std::to_string(access(cfg));
          }});
    };
    auto add_bool = [&](const std::string& name, const std::string& doc,
                        auto access) {
      keys.push_back(ConfigKey{
          name, doc,
          [access, name](ExperimentConfig& cfg, const std::string& value) {
            access(cfg) = detail::parse_config_bool(name, value);
          },
          [access](const ExperimentConfig& cfg) {
            return access(cfg) ? std::string("true") : std::string("false");
          }});
    };
    // The literal "" denotes an empty string so that every value, rendered,
    // survives a reload.
    auto add_string = [&](const std::string& name, const std::string& doc,
                          auto access) {
      keys.push_back(ConfigKey{
          name, doc,
          [access](ExperimentConfig& cfg, const std::string& value) {
            access(cfg) = value == "\"\"" ? std::string() : value;
          },
          [access](const ExperimentConfig& cfg) -> std::string {
            const std::string& current = access(cfg);
            return current.empty() ? std::string("\"\"") : current;
          }});
    };
    auto add_double_list = [&](const std::string& name, const std::string& doc,
                               auto access) {
      keys.push_back(ConfigKey{
          name, doc,
          [access, name](ExperimentConfig& cfg, const std::string& value) {
            access(cfg) = detail::parse_config_double_list(name, value);
          },
          [access](const ExperimentConfig& cfg) {
            return detail::format_list(access(cfg), detail::format_g17);
          }});
    };
    auto add_size_list = [&](const std::string& name, const std::string& doc,
                             auto access) {
      keys.push_back(ConfigKey{
          name, doc,
          [access, name](ExperimentConfig& cfg, const std::string& value) {
            access(cfg) = detail::parse_config_size_list(name, value);
          },
          [access](const ExperimentConfig& cfg) {
            return detail::format_list(
                access(cfg),
                [](std::size_t n) { return std::to_string(n); });
          }});
    };
    auto add_scheme_list = [&](const std::string& name, const std::string& doc,
                               auto access) {
      keys.push_back(ConfigKey{
          name, doc,
          [access, name](ExperimentConfig& cfg, const std::string& value) {
            access(cfg) = detail::parse_config_scheme_list(name, value);
          },
          [access](const ExperimentConfig& cfg) {
            return detail::format_list(
                access(cfg),
                [](SchemeKind s) { return scheme_label(s); });
          }});
    };

    add_double("market.kappa", "market variance mean-reversion speed",
               [](auto& c) -> auto& { return c.market.cir.kappa; });
    add_double("market.theta", "market long-run variance level",
               [](auto& c) -> auto& { return c.market.cir.theta; });
    add_double("market.gamma", "market vol-of-vol",
               [](auto& c) -> auto& { return c.market.cir.gamma; });
    add_double("market.v0", "market initial variance",
               [](auto& c) -> auto& { return c.market.cir.v0; });
    add_double("market.rho", "market spot/variance correlation",
               [](auto& c) -> auto& { return c.market.rho; });
    add_double("market.r", "risk-free rate",
               [](auto& c) -> auto& { return c.market.r; });
    add_double("market.s0", "initial spot",
               [](auto& c) -> auto& { return c.market.s0; });

    keys.push_back(ConfigKey{
        "model.p",
        "modification factor deriving the simulated dynamics from the market "
        "('none' simulates the market parameters unchanged)",
        [](ExperimentConfig& cfg, const std::string& value) {
          if (value == "none") {
            cfg.p.reset();
          } else {
            cfg.p = detail::parse_config_double("model.p", value);
          }
        },
        [](const ExperimentConfig& cfg) {
          return cfg.p ? detail::format_g17(*cfg.p) : std::string("none");
        }});

    add_scheme_list("run.schemes", "discretization schemes to run",
                    [](auto& c) -> auto& { return c.schemes; });
    add_size("run.paths", "Monte Carlo paths per run",
             [](auto& c) -> auto& { return c.paths; });
    add_size_list("run.steps", "time-step counts for the table runs",
                  [](auto& c) -> auto& { return c.steps; });
    add_double_list("run.strikes", "strikes as fractions of the initial spot",
                    [](auto& c) -> auto& { return c.strikes; });
    add_double("run.horizon", "option maturity in years",
               [](auto& c) -> auto& { return c.horizon; });
    keys.push_back(ConfigKey{
        "run.seed", "master seed for all random streams",
        [](ExperimentConfig& cfg, const std::string& value) {
          cfg.seed = detail::parse_config_u64("run.seed", value);
        },
        [](const ExperimentConfig& cfg) { return std::to_string(cfg.seed); }});
    add_int("run.threads", "worker thread budget",
            [](auto& c) -> auto& { return c.threads; });
    keys.push_back(ConfigKey{
        "run.error_metric", "error metric for tables and sweeps (iv|price)",
        [](ExperimentConfig& cfg, const std::string& value) {
          cfg.error_metric = parse_error_metric(value);
        },
        [](const ExperimentConfig& cfg) {
          return error_metric_label(cfg.error_metric);
        }});
    add_string("run.out", "output directory",
               [](auto& c) -> auto& { return c.out_dir; });
    add_bool("run.timings", "append wall-clock comment lines to table files",
             [](auto& c) -> auto& { return c.timings; });
    add_string("surface.path",
               "load the market surface from this file instead of building it",
               [](auto& c) -> auto& { return c.surface_path; });

    add_int("cos.n_terms", "Fourier-cosine series length",
            [](auto& c) -> auto& { return c.cos.n_terms; });
    add_double("cos.width", "integration half-width in standard deviations",
               [](auto& c) -> auto& { return c.cos.domain_width; });
    add_bool("cos.check", "verify series truncation against a tolerance",
             [](auto& c) -> auto& { return c.cos.check_truncation; });

    add_double("dupire.dt_bump", "maturity bump for the forward-in-time ratio",
               [](auto& c) -> auto& { return c.dupire.dt_bump; });
    add_double("dupire.dk_bump_rel", "relative strike bump for the curvature",
               [](auto& c) -> auto& { return c.dupire.dk_bump_rel; });
    add_double("dupire.denom_floor", "floor on the curvature denominator",
               [](auto& c) -> auto& { return c.dupire.denom_floor; });
    add_double("dupire.lv_floor", "lower clamp on the local variance",
               [](auto& c) -> auto& { return c.dupire.lv_floor; });
    add_double("dupire.lv_cap", "upper clamp on the local variance",
               [](auto& c) -> auto& { return c.dupire.lv_cap; });

    add_int("leverage.bins", "spot bins for the conditional expectation",
            [](auto& c) -> auto& { return c.leverage.bins.n_bins; });
    add_double("leverage.eps_v", "floor on the conditional variance",
               [](auto& c) -> auto& { return c.leverage.eps_v; });
    add_double("leverage.floor_sq", "lower clamp on the squared leverage",
               [](auto& c) -> auto& { return c.leverage.floor_sq; });
    add_double("leverage.cap_sq", "upper clamp on the squared leverage",
               [](auto& c) -> auto& { return c.leverage.cap_sq; });
    add_double("leverage.t_floor",
               "earliest calibration time (0 selects twice the maturity bump)",
               [](auto& c) -> auto& { return c.leverage.t_floor; });
    add_double("trunc.b", "truncation floor (0 selects the model default)",
               [](auto& c) -> auto& { return c.trunc_b; });

    add_size("sim.steps", "time steps for the simulate subcommand",
             [](auto& c) -> auto& { return c.sim_steps; });
    keys.push_back(ConfigKey{
        "sim.leverage", "leverage mode for simulate (calibrated|unit|zero)",
        [](ExperimentConfig& cfg, const std::string& value) {
          cfg.sim_leverage = parse_leverage_mode(value);
        },
        [](const ExperimentConfig& cfg) {
          return leverage_mode_label(cfg.sim_leverage);
        }});

    add_scheme_list("converge.schemes", "schemes for the order study",
                    [](auto& c) -> auto& { return c.converge_schemes; });
    add_double("converge.kappa", "order-study mean-reversion speed",
               [](auto& c) -> auto& { return c.converge_params.kappa; });
    add_double("converge.theta", "order-study long-run variance",
               [](auto& c) -> auto& { return c.converge_params.theta; });
    add_double("converge.gamma", "order-study vol-of-vol",
               [](auto& c) -> auto& { return c.converge_params.gamma; });
    add_double("converge.v0", "order-study initial variance",
               [](auto& c) -> auto& { return c.converge_params.v0; });
    add_double("converge.horizon", "order-study horizon in years",
               [](auto& c) -> auto& { return c.converge_horizon; });
    add_size_list("converge.levels", "step counts for the tested grids",
                  [](auto& c) -> auto& { return c.converge_levels; });
    add_size("converge.reference", "step count of the coupled reference grid",
             [](auto& c) -> auto& { return c.converge_reference; });
    add_size("converge.paths", "paths for the order study",
             [](auto& c) -> auto& { return c.converge_paths; });

    add_double("condexp.tau", "step size for the binning check",
               [](auto& c) -> auto& { return c.condexp_tau; });
    add_size("condexp.paths", "paths for the binning check",
             [](auto& c) -> auto& { return c.condexp_paths; });
    add_int("condexp.bins", "bins for the binning check",
            [](auto& c) -> auto& { return c.condexp_bins; });
    add_size_list("condexp.steps", "step indices at which curves are dumped",
                  [](auto& c) -> auto& { return c.condexp_steps; });
    add_scheme_list("condexp.schemes", "schemes compared in the binning check",
                    [](auto& c) -> auto& { return c.condexp_schemes; });

    keys.push_back(ConfigKey{
        "sweep.parameter", "swept parameter (vbar|p)",
        [](ExperimentConfig& cfg, const std::string& value) {
          if (value != "vbar" && value != "p") {
            throw InvalidInput(
                "config: key 'sweep.parameter' expects 'vbar' or 'p', got '" +
                value + "'");
          }
          cfg.sweep_parameter = value;
        },
        [](const ExperimentConfig& cfg) { return cfg.sweep_parameter; }});
    add_double_list("sweep.vbar_grid", "market long-run variance grid",
                    [](auto& c) -> auto& { return c.sweep_vbar_grid; });
    add_double_list("sweep.p_grid", "modification-factor grid",
                    [](auto& c) -> auto& { return c.sweep_p_grid; });
    add_size("sweep.steps", "time-step count used for every sweep cell",
             [](auto& c) -> auto& { return c.sweep_steps; });

    return keys;
  }();
  return registry;
}

inline const ConfigKey& find_config_key(const std::string& name) {
  for (const ConfigKey& key : config_registry()) {
    if (key.name == name) return key;
  }
  throw InvalidInput("config: unknown key '" + name + "'");
}

inline void apply_assignment(ExperimentConfig& cfg, const std::string& name,
                             const std::string& value) {
  find_config_key(name).apply(cfg, value);
}

// Reads `key = value` lines into cfg. Blank lines and `#` comments are
// ignored; anything else must be an assignment to a registered key.
inline void load_config_text(ExperimentConfig& cfg, std::istream& is,
                             const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string trimmed = detail::trim(line);
    if (trimmed.empty()) continue;
    const std::size_t eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw InvalidInput(source + ":" + std::to_string(line_no) +
                         ": expected 'key = value', got '" + trimmed + "'");
    }
    const std::string key = detail::trim(trimmed.substr(0, eq));
    const std::string value = detail::trim(trimmed.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw InvalidInput(source + ":" + std::to_string(line_no) +
                         ": empty key or value");
    }
    try {
      apply_assignment(cfg, key, value);
    } catch (const InvalidInput& err) {
      throw InvalidInput(source + ":" + std::to_string(line_no) + ": " +
                         err.what());
    }
  }
}

inline ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) {
    throw InvalidInput("config: cannot open '" + path + "'");
  }
  ExperimentConfig cfg;
  load_config_text(cfg, is, path);
  return cfg;
}

// Canonical rendering: every registered key in registry order. Loading the
// dump back reproduces the same configuration.
inline std::string dump_config(const ExperimentConfig& cfg) {
  std::string out;
  for (const ConfigKey& key : config_registry()) {
    out += key.name;
    out += " = ";
    out += key.render(cfg);
    out += '\n';
  }
  return out;
}

}  // namespace hslv
