#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "volburg/burg.hpp"
#include "volburg/error.hpp"

namespace volburg {

enum class Direction { forward, backward };

struct Forecast {
  // For Direction::backward, values[0] is the estimate of the sample just
  // before the first observation, values[1] the one before that, and so on.
  std::vector<double> values;
  std::size_t horizon = 0;
  Direction direction = Direction::forward;
  double rms_offset = 0.0;
  bool offset_applied = false;
};

struct ResidualReport {
  std::vector<double> residuals;
  double mean_square = 0.0;
  double rms = 0.0;
};

/// In-sample one-step discrepancies of `model` on `x`, for t = P..len-1.
inline ResidualReport residuals(const ArModel& model, std::span<const double> x) {
  const std::size_t p = model.order_p;
  require(x.size() > p, ErrorKind::InsufficientData,
          "series shorter than model order + 1");
  ResidualReport rep;
  rep.residuals.resize(x.size() - p);
  const double mu = model.signal_mean;
  double ss = 0.0;
  for (std::size_t t = p; t < x.size(); ++t) {
    double pred = 0.0;
    for (std::size_t j = 1; j <= p; ++j) pred += model.coeffs[j - 1] * (x[t - j] - mu);
    const double r = (x[t] - mu) - pred;
    rep.residuals[t - p] = r;
    ss += r * r;
  }
  rep.mean_square = ss / static_cast<double>(rep.residuals.size());
  rep.rms = std::sqrt(rep.mean_square);
  return rep;
}

namespace detail {

// Multi-step recursion on the demeaned tail of `x`; predictions are fed back.
inline std::vector<double> run_recursion(const ArModel& model,
                                         std::span<const double> x,
                                         std::size_t horizon) {
  const std::size_t p = model.order_p;
  const double mu = model.signal_mean;
  std::vector<double> hist(p + horizon);
  for (std::size_t i = 0; i < p; ++i) hist[i] = x[x.size() - p + i] - mu;
  for (std::size_t h = 0; h < horizon; ++h) {
    const std::size_t t = p + h;
    double y = 0.0;
    for (std::size_t j = 1; j <= p; ++j) y += model.coeffs[j - 1] * hist[t - j];
    hist[t] = y;
  }
  return {hist.begin() + static_cast<std::ptrdiff_t>(p), hist.end()};
}

}  // namespace detail

/// Extrapolates `horizon` levels past the end (forward) or before the start
/// (backward) of `x`. The backward pass runs the same coefficients on the
/// reversed series. With `apply_offset`, the in-sample rms residual is added
/// to every emitted level.
inline Forecast extrapolate(const ArModel& model, std::span<const double> x,
                            std::size_t horizon,
                            Direction direction = Direction::forward,
                            bool apply_offset = false) {
  require(horizon >= 1, ErrorKind::InvalidInput, "forecast horizon must be >= 1");
  require(x.size() >= model.order_p, ErrorKind::InsufficientData,
          "series shorter than model order");

  std::vector<double> seq(x.begin(), x.end());
  if (direction == Direction::backward) std::reverse(seq.begin(), seq.end());

  Forecast fc;
  fc.horizon = horizon;
  fc.direction = direction;
  fc.offset_applied = apply_offset;
  if (apply_offset) fc.rms_offset = residuals(model, seq).rms;

  fc.values = detail::run_recursion(model, seq, horizon);
  for (double& v : fc.values) v += model.signal_mean + fc.rms_offset;
  return fc;
}

/// Hold-out divergence between forward and backward extrapolations and the
/// data they skipped, normalised by the series' standard deviation. Near 0 for
/// a recoverable recursion, near 1 when forecasts collapse to the mean.
inline double fb_agreement(std::span<const double> x, std::size_t order_p,
                           std::size_t horizon) {
  require(horizon >= 1, ErrorKind::InvalidInput, "forecast horizon must be >= 1");
  require(x.size() >= 2 * order_p + horizon + 1, ErrorKind::InsufficientData,
          "series too short for forward/backward hold-out");
  const std::size_t n = x.size();

  const auto head = x.first(n - horizon);
  const ArModel fwd_model = burg_fit(head, order_p);
  const Forecast fwd = extrapolate(fwd_model, head, horizon, Direction::forward);
  double fwd_ss = 0.0;
  for (std::size_t i = 0; i < horizon; ++i) {
    const double e = fwd.values[i] - x[n - horizon + i];
    fwd_ss += e * e;
  }

  const auto tail = x.last(n - horizon);
  std::vector<double> reversed(tail.rbegin(), tail.rend());
  const ArModel bwd_model = burg_fit(reversed, order_p);
  const Forecast bwd = extrapolate(bwd_model, reversed, horizon, Direction::forward);
  double bwd_ss = 0.0;
  for (std::size_t i = 0; i < horizon; ++i) {
    const double e = bwd.values[i] - x[horizon - 1 - i];
    bwd_ss += e * e;
  }

  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / static_cast<double>(n - 1));
  require(sd > 0.0, ErrorKind::DegenerateSignal, "constant input signal");

  const double mse = (fwd_ss + bwd_ss) / (2.0 * static_cast<double>(horizon));
  return std::sqrt(mse) / sd;
}

}  // namespace volburg
