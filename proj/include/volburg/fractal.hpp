#pragma once

// Growth-of-range Hurst estimation and the fractal metrics derived from H.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <span>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "volburg/error.hpp"

namespace volburg {

struct HurstEstimate {
  double h = 0.0;
  double c = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double r_squared = 0.0;
  std::vector<std::size_t> window_sizes;  // points per window
  std::vector<double> mean_ranges;
};

struct FractalMetrics {
  double alpha = 0.0;    // 1/H
  double beta = 0.0;     // 2H + 1
  double d_trace = 0.0;  // box-counting dimension of the graph, 2 - H
  double d_path = 0.0;   // box-counting dimension of a path, min(1/H, D_E)
  int euclidean_dim = 2;
};

/// Mean of max - min over every window of `dt` consecutive points.
inline double mean_range(std::span<const double> y, std::size_t dt) {
  require(dt >= 2, ErrorKind::InvalidInput, "range window must be >= 2");
  require(dt <= y.size(), ErrorKind::InsufficientData,
          "range window longer than the series");
  // Monotone deques of indices give the running max/min in O(N).
  std::deque<std::size_t> hi;
  std::deque<std::size_t> lo;
  double total = 0.0;
  for (std::size_t t = 0; t < y.size(); ++t) {
    while (!hi.empty() && y[hi.back()] <= y[t]) hi.pop_back();
    while (!lo.empty() && y[lo.back()] >= y[t]) lo.pop_back();
    hi.push_back(t);
    lo.push_back(t);
    if (t + 1 < dt) continue;
    const std::size_t start = t + 1 - dt;
    while (hi.front() < start) hi.pop_front();
    while (lo.front() < start) lo.pop_front();
    total += y[hi.front()] - y[lo.front()];
  }
  return total / static_cast<double>(y.size() - dt + 1);
}

/// Ten log-spaced window sizes from clamp(len/64, 8, 64) to len/4.
inline std::vector<std::size_t> default_window_sizes(std::size_t len) {
  const std::size_t lo = std::clamp<std::size_t>(len / 64, 8, 64);
  const std::size_t hi = len / 4;
  require(hi > lo, ErrorKind::InsufficientData,
          "series too short for the default window schedule");
  constexpr int kCount = 10;
  std::vector<std::size_t> out;
  const double a = std::log(static_cast<double>(lo));
  const double b = std::log(static_cast<double>(hi));
  for (int i = 0; i < kCount; ++i) {
    const double w = std::exp(a + (b - a) * i / (kCount - 1));
    const auto s = static_cast<std::size_t>(std::llround(w));
    if (out.empty() || s > out.back()) out.push_back(s);
  }
  return out;
}

/// OLS of log<R> on log(span) where span = dt - 1 is the time covered by a
/// window of dt samples. h is the slope, c = exp(intercept), and the CI is
/// the two-sided 95% Student-t interval on the slope.
inline HurstEstimate hurst_estimate(std::span<const double> y,
                                    std::span<const std::size_t> window_sizes) {
  const auto [mn, mx] = std::minmax_element(y.begin(), y.end());
  require(!y.empty() && *mn != *mx, ErrorKind::DegenerateSignal,
          "constant input signal");

  std::vector<std::size_t> sizes(window_sizes.begin(), window_sizes.end());
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  for (std::size_t s : sizes) {
    require(s >= 2 && 2 * s <= y.size(), ErrorKind::InvalidInput,
            "window sizes must lie in [2, len/2]");
  }

  HurstEstimate est;
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t s : sizes) {
    const double r = mean_range(y, s);
    if (r <= 0.0) continue;  // flat stretch: log undefined
    est.window_sizes.push_back(s);
    est.mean_ranges.push_back(r);
    lx.push_back(std::log(static_cast<double>(s - 1)));
    ly.push_back(std::log(r));
  }
  const std::size_t k = lx.size();
  require(k >= 4, ErrorKind::InsufficientData,
          "fewer than 4 usable window sizes");

  double mxl = 0.0;
  double myl = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    mxl += lx[i];
    myl += ly[i];
  }
  mxl /= static_cast<double>(k);
  myl /= static_cast<double>(k);
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (lx[i] - mxl) * (lx[i] - mxl);
    sxy += (lx[i] - mxl) * (ly[i] - myl);
    syy += (ly[i] - myl) * (ly[i] - myl);
  }
  const double slope = sxy / sxx;
  const double intercept = myl - slope * mxl;
  const double sse = std::max(0.0, syy - slope * sxy);
  const double dof = static_cast<double>(k - 2);
  const double se = std::sqrt(sse / dof / sxx);
  const boost::math::students_t dist(dof);
  const double tq = boost::math::quantile(dist, 0.975);

  est.h = slope;
  est.c = std::exp(intercept);
  est.ci_low = slope - tq * se;
  est.ci_high = slope + tq * se;
  est.r_squared = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
  return est;
}

inline HurstEstimate hurst_estimate(std::span<const double> y) {
  const auto sizes = default_window_sizes(y.size());
  return hurst_estimate(y, sizes);
}

inline FractalMetrics fractal_metrics(double h, int euclidean_dim = 2) {
  require(h > 0.0 && h <= 1.0, ErrorKind::InvalidInput, "H must lie in (0, 1]");
  require(euclidean_dim >= 1, ErrorKind::InvalidInput,
          "euclidean dimension must be >= 1");
  FractalMetrics m;
  m.alpha = 1.0 / h;
  m.beta = 2.0 * h + 1.0;
  m.d_trace = 2.0 - h;
  m.d_path = std::min(1.0 / h, static_cast<double>(euclidean_dim));
  m.euclidean_dim = euclidean_dim;
  return m;
}

/// Maximum-likelihood Pareto shape: n / sum ln(x_i / x_min).
inline double pareto_shape_mle(std::span<const double> samples, double x_min) {
  require(x_min > 0.0, ErrorKind::InvalidInput, "x_min must be positive");
  require(!samples.empty(), ErrorKind::InsufficientData, "no samples");
  double s = 0.0;
  std::size_t above = 0;
  for (double v : samples) {
    require(v >= x_min, ErrorKind::InvalidInput, "sample below x_min");
    if (v > x_min) ++above;
    s += std::log(v / x_min);
  }
  require(s > 0.0, ErrorKind::DegenerateSignal, "all samples equal x_min");
  require(above >= 2, ErrorKind::InsufficientData,
          "need at least 2 samples above x_min");
  return static_cast<double>(samples.size()) / s;
}

}  // namespace volburg
