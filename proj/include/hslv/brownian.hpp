#pragma once

// Brownian increment grids with exact dyadic coupling.
//
// A grid holds, conceptually, M independent paths of N increment pairs
// (dW, dW_tilde), each N(0, T/N), with the two component processes mutually
// independent: asset-variance correlation is realized later by explicit
// mixing in the asset step, never here.
//
// Increments are never stored. Every base-level increment is a pure function
// of (seed, domain, path, step) through the counter-based generator, so the
// grid streams values on demand at any ensemble size with O(1) memory;
// coarser levels are represented by an aggregation factor and sum consecutive
// base increments in a fixed left-to-right order, which makes refinement
// coupling bitwise exact.

#include <cstdint>
#include <vector>

#include "hslv/errors.hpp"
#include "hslv/rng.hpp"

namespace hslv {

class BrownianGrid {
 public:
  // Builds a grid at its own finest ("base") level.
  BrownianGrid(std::uint64_t seed, double horizon, std::int64_t n_steps,
               std::int64_t n_paths)
      : seed_(seed),
        horizon_(horizon),
        base_steps_(n_steps),
        factor_(1),
        n_paths_(n_paths) {
    if (!(horizon > 0.0)) throw InvalidInput("BrownianGrid: horizon must be positive");
    if (n_steps < 1) throw InvalidInput("BrownianGrid: need at least one step");
    if (n_paths < 1) throw InvalidInput("BrownianGrid: need at least one path");
  }

  std::uint64_t seed() const { return seed_; }
  double horizon() const { return horizon_; }
  std::int64_t n_steps() const { return base_steps_ / factor_; }
  std::int64_t n_paths() const { return n_paths_; }
  double tau() const { return horizon_ / static_cast<double>(n_steps()); }
  std::int64_t base_steps() const { return base_steps_; }
  std::int64_t factor() const { return factor_; }

  // Increment m of the variance-driving process on path p at this level.
  double dw(std::int64_t path, std::int64_t m) const {
    return aggregate(stream_domain::kGridW, path, m);
  }

  // Increment m of the orthogonal process on path p at this level.
  double dw_tilde(std::int64_t path, std::int64_t m) const {
    return aggregate(stream_domain::kGridWTilde, path, m);
  }

  // Grid with half as many steps whose increment m is the exact sum of this
  // level's increments 2m and 2m+1.
  BrownianGrid coarsen() const {
    if (n_steps() % 2 != 0) {
      throw InvalidInput("BrownianGrid::coarsen: step count must be even");
    }
    BrownianGrid g = *this;
    g.factor_ = factor_ * 2;
    return g;
  }

  // Fills out[0..n_steps) with path p's base-level variance-process
  // increments; the hot path for convergence studies that revisit one path
  // at several levels.
  void fill_base_dw(std::int64_t path, std::vector<double>& out) const {
    out.resize(static_cast<std::size_t>(base_steps_));
    const double scale = base_scale();
    RandomStream s(seed_, stream_domain::kGridW + static_cast<std::uint64_t>(path));
    for (std::int64_t m = 0; m < base_steps_; ++m) {
      out[static_cast<std::size_t>(m)] =
          scale * normal_icdf(s.uniform_at(static_cast<std::uint64_t>(m)));
    }
  }

 private:
  double base_scale() const {
    const double base_tau = horizon_ / static_cast<double>(base_steps_);
    return std::sqrt(base_tau);
  }

  double base_increment(std::uint64_t domain, std::int64_t path,
                        std::int64_t m) const {
    RandomStream s(seed_, domain + static_cast<std::uint64_t>(path));
    return base_scale() * normal_icdf(s.uniform_at(static_cast<std::uint64_t>(m)));
  }

  double aggregate(std::uint64_t domain, std::int64_t path,
                   std::int64_t m) const {
    if (path < 0 || path >= n_paths_) {
      throw InvalidInput("BrownianGrid: path index out of range");
    }
    if (m < 0 || m >= n_steps()) {
      throw InvalidInput("BrownianGrid: step index out of range");
    }
    const std::int64_t first = m * factor_;
    double sum = 0.0;
    for (std::int64_t j = 0; j < factor_; ++j) {
      sum += base_increment(domain, path, first + j);
    }
    return sum;
  }

  std::uint64_t seed_;
  double horizon_;
  std::int64_t base_steps_;
  std::int64_t factor_;
  std::int64_t n_paths_;
};

// Named constructor form used by callers that read like the design notes.
inline BrownianGrid make_brownian_grid(std::uint64_t seed, double horizon,
                                       std::int64_t n_steps,
                                       std::int64_t n_paths) {
  return BrownianGrid(seed, horizon, n_steps, n_paths);
}

}  // namespace hslv
