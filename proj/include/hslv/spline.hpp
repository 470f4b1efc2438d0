#pragma once
// One-dimensional interpolants used by the call surface: a natural cubic
// spline (C2, for the strike direction) and a Fritsch-Carlson monotone
// piecewise-cubic Hermite interpolant (shape-preserving, for the maturity
// direction). Both extrapolate flat beyond the knot range.

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "hslv/errors.hpp"

namespace hslv {

namespace detail {

inline void check_knots(const std::vector<double>& x,
                        const std::vector<double>& y, const char* who) {
  if (x.size() != y.size()) {
    throw InvalidInput(std::string(who) + ": x and y sizes differ");
  }
  if (x.size() < 2) {
    throw InvalidInput(std::string(who) + ": needs at least two knots");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw InvalidInput(std::string(who) + ": non-finite knot");
    }
    if (i > 0 && !(x[i] > x[i - 1])) {
      throw InvalidInput(std::string(who) +
                         ": x must be strictly increasing");
    }
  }
}

// Index of the segment [x_i, x_{i+1}] containing q, for q inside the range.
inline std::size_t find_segment(const std::vector<double>& x, double q) {
  std::size_t lo = 0, hi = x.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (x[mid] <= q) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace detail

// Natural cubic spline: zero second derivative at both ends.
class CubicSpline {
 public:
  CubicSpline(std::vector<double> x, std::vector<double> y)
      : x_(std::move(x)), y_(std::move(y)) {
    detail::check_knots(x_, y_, "CubicSpline");
    const std::size_t n = x_.size();
    c_.assign(n, 0.0);
    if (n > 2) {
      // Thomas algorithm on the tridiagonal system for interior second
      // derivatives; natural boundary rows are eliminated up front.
      std::vector<double> diag(n, 0.0), rhs(n, 0.0), upper(n, 0.0);
      for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = x_[i] - x_[i - 1];
        const double h1 = x_[i + 1] - x_[i];
        diag[i] = 2.0 * (h0 + h1);
        upper[i] = h1;
        rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
      }
      for (std::size_t i = 2; i + 1 < n; ++i) {
        const double h0 = x_[i] - x_[i - 1];
        const double w = h0 / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
      }
      for (std::size_t i = n - 2; i >= 1; --i) {
        c_[i] = (rhs[i] - upper[i] * c_[i + 1]) / diag[i];
      }
    }
  }

  // Value at q; constant beyond the first/last knot.
  double operator()(double q) const {
    if (q <= x_.front()) {
      return y_.front();
    }
    if (q >= x_.back()) {
      return y_.back();
    }
    const std::size_t i = detail::find_segment(x_, q);
    const double h = x_[i + 1] - x_[i];
    const double t = q - x_[i];
    const double b =
        (y_[i + 1] - y_[i]) / h - h * (2.0 * c_[i] + c_[i + 1]) / 6.0;
    const double d = (c_[i + 1] - c_[i]) / (6.0 * h);
    return y_[i] + t * (b + t * (0.5 * c_[i] + t * d));
  }

  double min_x() const { return x_.front(); }
  double max_x() const { return x_.back(); }

 private:
  std::vector<double> x_, y_;
  std::vector<double> c_;  // second derivatives at knots
};

// Monotone piecewise-cubic Hermite interpolant with Fritsch-Carlson slopes:
// preserves monotonicity of the data and never overshoots local extrema.
class PchipSpline {
 public:
  PchipSpline(std::vector<double> x, std::vector<double> y)
      : x_(std::move(x)), y_(std::move(y)) {
    detail::check_knots(x_, y_, "PchipSpline");
    const std::size_t n = x_.size();
    d_.assign(n, 0.0);
    if (n == 2) {
      d_[0] = d_[1] = (y_[1] - y_[0]) / (x_[1] - x_[0]);
      return;
    }
    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      h[i] = x_[i + 1] - x_[i];
      delta[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (delta[i - 1] == 0.0 || delta[i] == 0.0 ||
          (delta[i - 1] > 0.0) != (delta[i] > 0.0)) {
        d_[i] = 0.0;
      } else {
        const double w1 = 2.0 * h[i] + h[i - 1];
        const double w2 = h[i] + 2.0 * h[i - 1];
        d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
      }
    }
    d_[0] = edge_slope(h[0], h[1], delta[0], delta[1]);
    d_[n - 1] = edge_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  }

  // Value at q; constant beyond the first/last knot.
  double operator()(double q) const {
    if (q <= x_.front()) {
      return y_.front();
    }
    if (q >= x_.back()) {
      return y_.back();
    }
    const std::size_t i = detail::find_segment(x_, q);
    const double h = x_[i + 1] - x_[i];
    const double t = (q - x_[i]) / h;
    const double h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
    const double h10 = t * (1.0 - t) * (1.0 - t);
    const double h01 = t * t * (3.0 - 2.0 * t);
    const double h11 = t * t * (t - 1.0);
    return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] +
           h11 * h * d_[i + 1];
  }

  double min_x() const { return x_.front(); }
  double max_x() const { return x_.back(); }

 private:
  // Shape-limited three-point end slope.
  static double edge_slope(double h0, double h1, double del0, double del1) {
    const double d = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
    const auto sgn = [](double v) { return (v > 0.0) - (v < 0.0); };
    if (sgn(d) != sgn(del0)) {
      return 0.0;
    }
    if (sgn(del0) != sgn(del1) && std::fabs(d) > 3.0 * std::fabs(del0)) {
      return 3.0 * del0;
    }
    return d;
  }

  std::vector<double> x_, y_;
  std::vector<double> d_;  // first derivatives at knots
};

}  // namespace hslv
