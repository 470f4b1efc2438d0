#pragma once
// Binned estimate of E[V | S] from a cross-section of (S, V) samples.
// Bins are quantile-based: samples are sorted by S and split into groups
// whose counts differ by at most one, so every bin mean carries comparable
// statistical weight. Interior bin edges sit halfway between the S values
// that straddle adjacent groups; queries outside the sampled range clamp
// to the nearest bin.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

#include "hslv/errors.hpp"

namespace hslv {

struct BinSpec {
  int n_bins = 20;

  void validate() const {
    if (n_bins < 2) {
      throw InvalidInput("BinSpec: n_bins must be at least 2");
    }
  }
};

class ConditionalExpectation {
 public:
  ConditionalExpectation(std::vector<double> edges, std::vector<double> means)
      : edges_(std::move(edges)), means_(std::move(means)) {
    if (means_.empty() || edges_.size() != means_.size() + 1) {
      throw InvalidInput(
          "ConditionalExpectation: need n_bins + 1 edges for n_bins means");
    }
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      if (!std::isfinite(edges_[i]) ||
          (i > 0 && !(edges_[i] >= edges_[i - 1]))) {
        throw InvalidInput(
            "ConditionalExpectation: edges must be finite and nondecreasing");
      }
    }
    for (double m : means_) {
      if (!std::isfinite(m)) {
        throw InvalidInput("ConditionalExpectation: non-finite bin mean");
      }
    }
  }

  // Mean of the bin containing s; the first or last bin when s falls
  // outside the sampled range.
  double operator()(double s) const {
    if (s <= edges_.front()) {
      return means_.front();
    }
    if (s >= edges_.back()) {
      return means_.back();
    }
    const auto it = std::upper_bound(edges_.begin() + 1, edges_.end() - 1, s);
    const std::size_t idx =
        static_cast<std::size_t>(it - (edges_.begin() + 1));
    return means_[idx];
  }

  const std::vector<double>& bin_edges() const { return edges_; }
  const std::vector<double>& bin_means() const { return means_; }
  std::size_t n_bins() const { return means_.size(); }

 private:
  std::vector<double> edges_;
  std::vector<double> means_;
};

inline ConditionalExpectation estimate_conditional_expectation(
    const std::vector<double>& s, const std::vector<double>& v,
    const BinSpec& spec = BinSpec{}) {
  spec.validate();
  if (s.size() != v.size()) {
    throw InvalidInput(
        "estimate_conditional_expectation: sample size mismatch");
  }
  const std::size_t n = s.size();
  const std::size_t m = static_cast<std::size_t>(spec.n_bins);
  if (n < m) {
    throw InvalidInput(
        "estimate_conditional_expectation: fewer samples than bins");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(s[i]) || !std::isfinite(v[i])) {
      throw InvalidInput(
          "estimate_conditional_expectation: non-finite sample");
    }
  }
  // Sort indices by S, ties broken by index so the grouping is reproducible
  // regardless of how the samples were produced.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return s[a] < s[b] || (s[a] == s[b] && a < b);
  });
  const std::size_t base = n / m;
  const std::size_t rem = n % m;
  std::vector<double> edges(m + 1), means(m);
  edges[0] = s[order.front()];
  edges[m] = s[order.back()];
  std::size_t pos = 0;
  for (std::size_t g = 0; g < m; ++g) {
    const std::size_t count = base + (g < rem ? 1 : 0);
    double sum = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      sum += v[order[pos + i]];
    }
    means[g] = sum / static_cast<double>(count);
    if (g + 1 < m) {
      edges[g + 1] =
          0.5 * (s[order[pos + count - 1]] + s[order[pos + count]]);
    }
    pos += count;
  }
  return ConditionalExpectation(std::move(edges), std::move(means));
}

}  // namespace hslv
