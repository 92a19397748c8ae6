#pragma once

// Price ingestion types and the derived signals every estimator consumes:
// log returns, squared returns, sliding-window volatility and EWMA smoothing.

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "volburg/error.hpp"

namespace volburg {

struct PriceSeries {
  std::vector<std::string> labels;
  std::vector<double> prices;
  std::string asset_name;

  std::size_t size() const noexcept { return prices.size(); }
};

struct ReturnSeries {
  std::vector<double> values;
  std::string source_asset;

  std::size_t size() const noexcept { return values.size(); }
};

/// How a window's dispersion is measured. `paper_literal` is the mean absolute
/// deviation about the window mean; `stdev` is the sample standard deviation.
enum class VolMode { paper_literal, stdev };

struct VolSeries {
  std::vector<double> values;
  std::size_t window_n = 0;
  VolMode mode = VolMode::paper_literal;

  std::size_t size() const noexcept { return values.size(); }
};

inline void validate(const PriceSeries& p) {
  require(p.prices.size() >= 2, ErrorKind::InsufficientData,
          "price series needs at least 2 observations");
  require(p.labels.empty() || p.labels.size() == p.prices.size(),
          ErrorKind::InvalidInput, "labels and prices differ in length");
  for (std::size_t i = 0; i < p.prices.size(); ++i) {
    if (!(p.prices[i] > 0.0) || !std::isfinite(p.prices[i])) {
      fail(ErrorKind::InvalidInput,
           "non-positive price at index " + std::to_string(i));
    }
  }
}

inline ReturnSeries log_returns(const PriceSeries& p) {
  validate(p);
  ReturnSeries out;
  out.source_asset = p.asset_name;
  out.values.reserve(p.prices.size() - 1);
  for (std::size_t t = 0; t + 1 < p.prices.size(); ++t) {
    out.values.push_back(std::log(p.prices[t + 1] / p.prices[t]));
  }
  return out;
}

inline std::vector<double> squared(std::span<const double> x) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * x[i];
  return out;
}

/// Sliding dispersion of `x` over windows of `n` points, advancing one point
/// at a time; only complete windows are emitted.
inline VolSeries historical_vol(std::span<const double> x, std::size_t n,
                                VolMode mode = VolMode::paper_literal) {
  require(n >= 2, ErrorKind::InvalidInput, "volatility window must be >= 2");
  require(n <= x.size(), ErrorKind::InsufficientData,
          "volatility window longer than the series");

  VolSeries out;
  out.window_n = n;
  out.mode = mode;
  out.values.reserve(x.size() - n + 1);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i + n <= x.size(); ++i) {
    const auto window = x.subspan(i, n);
    double mean = 0.0;
    for (double v : window) mean += v;
    mean *= inv_n;
    double acc = 0.0;
    if (mode == VolMode::paper_literal) {
      for (double v : window) acc += std::abs(mean - v);
      out.values.push_back(acc * inv_n);
    } else {
      for (double v : window) acc += (v - mean) * (v - mean);
      out.values.push_back(std::sqrt(acc / static_cast<double>(n - 1)));
    }
  }
  return out;
}

inline VolSeries historical_vol(const ReturnSeries& r, std::size_t n,
                                VolMode mode = VolMode::paper_literal) {
  return historical_vol(std::span<const double>(r.values), n, mode);
}

inline std::vector<double> ewma(std::span<const double> x, double lambda) {
  require(lambda > 0.0 && lambda < 1.0, ErrorKind::InvalidInput,
          "EWMA lambda must lie in (0, 1)");
  require(!x.empty(), ErrorKind::InsufficientData, "EWMA of an empty series");
  std::vector<double> s(x.size());
  s[0] = x[0];
  for (std::size_t t = 1; t < x.size(); ++t) {
    s[t] = lambda * s[t - 1] + (1.0 - lambda) * x[t];
  }
  return s;
}

inline std::vector<double> cumulative_sum(std::span<const double> x) {
  std::vector<double> out(x.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    acc += x[i];
    out[i] = acc;
  }
  return out;
}

}  // namespace volburg
