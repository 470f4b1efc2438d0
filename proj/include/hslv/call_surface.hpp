#pragma once
// Synthetic market call surface: a rectangular (maturity, strike) grid of
// call prices with static-arbitrage verification, a smooth evaluator that
// interpolates total implied variance (natural cubic spline in log-strike,
// monotone cubic in maturity anchored at zero), and delimited-text export
// and import. In-the-money nodes are priced through the put side at build
// time for a better-conditioned implied-vol extraction; nodes whose price
// sits too close to the arbitrage band for a resolvable implied vol are
// wing-filled flat in log-strike from the nearest resolvable node.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hslv/black_scholes.hpp"
#include "hslv/cos_pricer.hpp"
#include "hslv/errors.hpp"
#include "hslv/params.hpp"
#include "hslv/spline.hpp"

namespace hslv {

inline std::vector<double> default_surface_maturities() {
  return {0.25, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0};
}

// 60 log-spaced strikes spanning [0.3, 3.0] times spot.
inline std::vector<double> default_surface_strikes(double s0) {
  std::vector<double> out;
  const int n = 60;
  for (int j = 0; j < n; ++j) {
    out.push_back(0.3 * s0 * std::pow(10.0, static_cast<double>(j) / (n - 1)));
  }
  return out;
}

class CallSurface {
 public:
  CallSurface(std::vector<double> maturities, std::vector<double> strikes,
              std::vector<std::vector<double>> prices, double s0, double r)
      : maturities_(std::move(maturities)),
        strikes_(std::move(strikes)),
        prices_(std::move(prices)),
        s0_(s0),
        r_(r) {
    validate_grids();
    verify_no_arbitrage();
    build_variance_grid();
  }

  // Smoothly interpolated call price at (t, K). Maturities beyond the grid
  // are refused; strikes beyond the grid use the flat total-variance wings.
  double price(double t, double K) const {
    const double w = total_variance(t, K);
    const double t_eff = std::min(t, maturities_.back());
    if (w <= 0.0 || t_eff <= 1e-12) {
      return std::max(s0_ - K * std::exp(-r_ * t_eff), 0.0);
    }
    return bs_call_price(s0_, K, t_eff, r_, std::sqrt(w / t_eff));
  }

  // Total implied variance at (t, K): per-maturity spline in log-strike,
  // then a shape-preserving maturity interpolation through (0, 0).
  double total_variance(double t, double K) const {
    if (!(K > 0.0) || !std::isfinite(K)) {
      throw InvalidInput("CallSurface: strike must be positive");
    }
    if (!(t >= 0.0) || !std::isfinite(t)) {
      throw InvalidInput("CallSurface: maturity must be nonnegative");
    }
    if (t > maturities_.back() + 1e-9) {
      throw ExtrapolationError(
          "CallSurface: maturity beyond the surface grid");
    }
    const double k = std::log(K / s0_);
    std::vector<double> tt(maturities_.size() + 1, 0.0);
    std::vector<double> ww(maturities_.size() + 1, 0.0);
    for (std::size_t i = 0; i < maturities_.size(); ++i) {
      tt[i + 1] = maturities_[i];
      ww[i + 1] = w_splines_[i](k);
    }
    const PchipSpline in_t(std::move(tt), std::move(ww));
    return in_t(std::min(t, maturities_.back()));
  }

  const std::vector<double>& maturities() const { return maturities_; }
  const std::vector<double>& strikes() const { return strikes_; }
  double node_price(std::size_t i, std::size_t j) const {
    return prices_[i][j];
  }
  double node_total_variance(std::size_t i, std::size_t j) const {
    return w_[i][j];
  }
  double s0() const { return s0_; }
  double r() const { return r_; }
  double min_strike() const { return strikes_.front(); }
  double max_strike() const { return strikes_.back(); }
  double max_maturity() const { return maturities_.back(); }

  void save(std::ostream& os) const {
    os << "t,K,price\n";
    char buf[128];
    for (std::size_t i = 0; i < maturities_.size(); ++i) {
      for (std::size_t j = 0; j < strikes_.size(); ++j) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", maturities_[i],
                      strikes_[j], prices_[i][j]);
        os << buf;
      }
    }
  }

  void save(const std::string& path) const {
    std::ofstream os(path);
    if (!os) {
      throw InvalidInput("CallSurface: cannot open " + path + " for write");
    }
    save(os);
  }

 private:
  void validate_grids() const {
    if (maturities_.empty() || strikes_.size() < 3) {
      throw InvalidInput(
          "CallSurface: needs at least one maturity and three strikes");
    }
    for (std::size_t i = 0; i < maturities_.size(); ++i) {
      if (!(maturities_[i] > 0.0) || !std::isfinite(maturities_[i]) ||
          (i > 0 && !(maturities_[i] > maturities_[i - 1]))) {
        throw InvalidInput(
            "CallSurface: maturities must be positive and strictly "
            "increasing");
      }
    }
    for (std::size_t j = 0; j < strikes_.size(); ++j) {
      if (!(strikes_[j] > 0.0) || !std::isfinite(strikes_[j]) ||
          (j > 0 && !(strikes_[j] > strikes_[j - 1]))) {
        throw InvalidInput(
            "CallSurface: strikes must be positive and strictly increasing");
      }
    }
    if (prices_.size() != maturities_.size()) {
      throw InvalidInput("CallSurface: price matrix row count mismatch");
    }
    for (const auto& row : prices_) {
      if (row.size() != strikes_.size()) {
        throw InvalidInput("CallSurface: price matrix column count mismatch");
      }
      for (double c : row) {
        if (!std::isfinite(c)) {
          throw InvalidInput("CallSurface: non-finite price");
        }
      }
    }
    if (!(s0_ > 0.0) || !std::isfinite(s0_) || !std::isfinite(r_)) {
      throw InvalidInput("CallSurface: bad spot or rate");
    }
  }

  [[noreturn]] static void arbitrage_violation(const char* what, double t,
                                               double K, double value) {
    char msg[160];
    std::snprintf(msg, sizeof(msg),
                  "CallSurface: %s violated at T=%.6g K=%.6g (value %.6g)",
                  what, t, K, value);
    throw ConstructionError(msg);
  }

  // Static no-arbitrage on the stored grid, all within a 1e-8 slack:
  // price bounds, monotonicity and convexity in strike, and (for zero
  // rates) monotonicity in maturity.
  void verify_no_arbitrage() const {
    const double slack = 1e-8;
    for (std::size_t i = 0; i < maturities_.size(); ++i) {
      const double T = maturities_[i];
      const double disc = std::exp(-r_ * T);
      for (std::size_t j = 0; j < strikes_.size(); ++j) {
        const double C = prices_[i][j];
        const double lower = std::max(s0_ - strikes_[j] * disc, 0.0);
        if (C < lower - slack || C > s0_ + slack) {
          arbitrage_violation("price bounds", T, strikes_[j], C);
        }
        if (j > 0 && prices_[i][j] > prices_[i][j - 1] + slack) {
          arbitrage_violation("strike monotonicity", T, strikes_[j], C);
        }
      }
      for (std::size_t j = 1; j + 1 < strikes_.size(); ++j) {
        const double s_left = (prices_[i][j] - prices_[i][j - 1]) /
                              (strikes_[j] - strikes_[j - 1]);
        const double s_right = (prices_[i][j + 1] - prices_[i][j]) /
                               (strikes_[j + 1] - strikes_[j]);
        if (s_right < s_left - slack) {
          arbitrage_violation("strike convexity", T, strikes_[j],
                              s_right - s_left);
        }
      }
    }
    if (r_ == 0.0) {
      for (std::size_t i = 1; i < maturities_.size(); ++i) {
        for (std::size_t j = 0; j < strikes_.size(); ++j) {
          if (prices_[i][j] < prices_[i - 1][j] - slack) {
            arbitrage_violation("calendar monotonicity", maturities_[i],
                                strikes_[j], prices_[i][j] - prices_[i - 1][j]);
          }
        }
      }
    }
  }

  // Convert the price grid to total implied variance. Nodes closer than a
  // resolution threshold to the arbitrage band cannot support a meaningful
  // implied vol; their variance is wing-filled flat from the nearest
  // resolvable strike in the same maturity row.
  void build_variance_grid() {
    constexpr double kResolutionThreshold = 1e-12;
    log_strikes_.clear();
    for (double K : strikes_) {
      log_strikes_.push_back(std::log(K / s0_));
    }
    w_.assign(maturities_.size(),
              std::vector<double>(strikes_.size(),
                                  std::numeric_limits<double>::quiet_NaN()));
    for (std::size_t i = 0; i < maturities_.size(); ++i) {
      const double T = maturities_[i];
      const double disc = std::exp(-r_ * T);
      std::ptrdiff_t first = -1, last = -1;
      for (std::size_t j = 0; j < strikes_.size(); ++j) {
        const double C = prices_[i][j];
        const double lower = std::max(s0_ - strikes_[j] * disc, 0.0);
        if (C - lower > kResolutionThreshold &&
            s0_ - C > kResolutionThreshold) {
          const double iv = implied_vol(C, s0_, strikes_[j], T, r_);
          w_[i][j] = iv * iv * T;
          if (first < 0) {
            first = static_cast<std::ptrdiff_t>(j);
          }
          last = static_cast<std::ptrdiff_t>(j);
        }
      }
      if (first < 0) {
        arbitrage_violation("implied-vol resolvability", T, strikes_.front(),
                            prices_[i].front());
      }
      for (std::ptrdiff_t j = first - 1; j >= 0; --j) {
        w_[i][j] = w_[i][first];
      }
      for (std::size_t j = static_cast<std::size_t>(last) + 1;
           j < strikes_.size(); ++j) {
        w_[i][j] = w_[i][last];
      }
    }
    w_splines_.clear();
    for (std::size_t i = 0; i < maturities_.size(); ++i) {
      w_splines_.emplace_back(log_strikes_, w_[i]);
    }
  }

  std::vector<double> maturities_, strikes_, log_strikes_;
  std::vector<std::vector<double>> prices_;
  std::vector<std::vector<double>> w_;
  std::vector<CubicSpline> w_splines_;
  double s0_ = 1.0, r_ = 0.0;
};

// Prices every grid node under the Heston parameters (in-the-money strikes
// through the put side plus parity) and assembles the verified surface.
inline CallSurface build_market_surface(const HestonParams& params,
                                        const std::vector<double>& maturities,
                                        const std::vector<double>& strikes,
                                        const CosConfig& cfg = CosConfig{}) {
  params.validate();
  std::vector<std::vector<double>> prices(maturities.size());
  for (std::size_t i = 0; i < maturities.size(); ++i) {
    const double T = maturities[i];
    const double disc = std::exp(-params.r * T);
    prices[i].resize(strikes.size());
    for (std::size_t j = 0; j < strikes.size(); ++j) {
      const double K = strikes[j];
      if (K * disc < params.s0) {
        prices[i][j] =
            cos_put_price(params, K, T, cfg) + params.s0 - K * disc;
      } else {
        prices[i][j] = cos_call_price(params, K, T, cfg);
      }
    }
  }
  return CallSurface(maturities, strikes, std::move(prices), params.s0,
                     params.r);
}

// Reads the delimited `t,K,price` format back into a verified surface. The
// file carries only the grid; spot and rate come from the caller.
inline CallSurface load_call_surface(std::istream& is, double s0, double r) {
  std::string line;
  if (!std::getline(is, line)) {
    throw InvalidInput("CallSurface: empty surface stream");
  }
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  if (line != "t,K,price") {
    throw InvalidInput("CallSurface: bad header, expected t,K,price");
  }
  std::map<double, std::map<double, double>> grid;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    double t = 0.0, K = 0.0, c = 0.0;
    char tail = '\0';
    if (std::sscanf(line.c_str(), "%lg,%lg,%lg%c", &t, &K, &c, &tail) != 3) {
      throw InvalidInput("CallSurface: malformed row: " + line);
    }
    if (!grid[t].emplace(K, c).second) {
      throw InvalidInput("CallSurface: duplicate node in surface file");
    }
  }
  if (grid.empty()) {
    throw InvalidInput("CallSurface: surface file has no rows");
  }
  std::vector<double> maturities, strikes;
  for (const auto& [t, row] : grid) {
    maturities.push_back(t);
  }
  for (const auto& [K, c] : grid.begin()->second) {
    strikes.push_back(K);
  }
  std::vector<std::vector<double>> prices;
  for (const auto& [t, row] : grid) {
    if (row.size() != strikes.size()) {
      throw InvalidInput("CallSurface: ragged grid in surface file");
    }
    std::vector<double> r_out;
    std::size_t j = 0;
    for (const auto& [K, c] : row) {
      if (K != strikes[j++]) {
        throw InvalidInput("CallSurface: inconsistent strike grid in file");
      }
      r_out.push_back(c);
    }
    prices.push_back(std::move(r_out));
  }
  return CallSurface(std::move(maturities), std::move(strikes),
                     std::move(prices), s0, r);
}

inline CallSurface load_call_surface(const std::string& path, double s0,
                                     double r) {
  std::ifstream is(path);
  if (!is) {
    throw InvalidInput("CallSurface: cannot open " + path);
  }
  return load_call_surface(is, s0, r);
}

}  // namespace hslv
