#pragma once

// End-to-end comparison: prices -> returns -> volatility signal ->
// spectrum-driven pole count -> Burg fit -> LPC forecast, against a GARCH(1,1)
// one-step forecast on the same returns.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <future>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "volburg/burg.hpp"
#include "volburg/error.hpp"
#include "volburg/forecast.hpp"
#include "volburg/fractal.hpp"
#include "volburg/garch.hpp"
#include "volburg/memspec.hpp"
#include "volburg/series.hpp"

namespace volburg {

struct PipelineConfig {
  std::size_t vol_window = 13;
  // nullopt: use round(cycle period) when the pole count comes from the rule.
  std::optional<std::size_t> forecast_len = 64;
  // nullopt: m = pole_order(cycle period, hurst_h_for_rule).
  std::optional<std::size_t> pole_order_override;
  double hurst_h_for_rule = 0.5;
  std::size_t exploratory_order = 32;
  double ewma_lambda = 0.928571429;
  VolMode vol_mode = VolMode::paper_literal;
  bool apply_offset = true;
  std::optional<double> annualize_factor;
  std::size_t spectrum_bins = kDefaultSpectrumBins;
  double min_period = kDefaultMinPeriod;
};

/// Paper protocol: 128 poles, 64-step forecast, 13-point volatility window.
inline PipelineConfig paper_protocol_config() {
  PipelineConfig cfg;
  cfg.pole_order_override = 128;
  cfg.forecast_len = 64;
  cfg.vol_window = 13;
  return cfg;
}

struct ComparisonRow {
  std::string asset;
  double lpc_vol = 0.0;
  double garch_vol = 0.0;
  std::size_t pole_order_used = 0;
  double cycle_length = 0.0;  // 0 when no cycle was found and m was fixed
  double hurst = 0.0;         // the H plugged into the pole rule
};

struct DiagnosticsReport {
  std::string asset;
  double pareto_p = 0.0;
  HurstEstimate hurst;
  FractalMetrics metrics;
  // Absent when no pole count could be selected (no spectral peak).
  std::optional<double> fb_score;
  std::size_t pole_order_used = 0;
  std::size_t horizon = 0;
};

/// Pole count, forecast length and the cycle they came from.
struct OrderSelection {
  std::size_t order = 0;
  std::size_t horizon = 0;
  double cycle_length = 0.0;
};

namespace detail {

template <class F>
auto staged(const char* stage, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.kind(), std::string(stage) + ": " + e.what());
  }
}

}  // namespace detail

/// Dominant cycle of the squared returns from an exploratory Burg fit.
inline CyclePeak squared_return_cycle(std::span<const double> returns,
                                      const PipelineConfig& cfg) {
  const auto sq = squared(returns);
  const ArModel model = burg_fit(sq, cfg.exploratory_order);
  return dominant_cycle(mem_spectrum(model, cfg.spectrum_bins), cfg.min_period);
}

inline OrderSelection select_order(std::span<const double> returns,
                                   const PipelineConfig& cfg) {
  OrderSelection sel;
  std::optional<CyclePeak> peak;
  try {
    peak = detail::staged("cycle", [&] { return squared_return_cycle(returns, cfg); });
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoPeak || !cfg.pole_order_override) throw;
  }
  if (peak) sel.cycle_length = peak->period;

  if (cfg.pole_order_override) {
    sel.order = *cfg.pole_order_override;
  } else {
    sel.order = detail::staged(
        "pole_order", [&] { return pole_order(peak->period, cfg.hurst_h_for_rule); });
  }
  if (cfg.forecast_len) {
    sel.horizon = *cfg.forecast_len;
  } else {
    require(peak.has_value(), ErrorKind::NoPeak,
            "forecast length needs a spectral cycle");
    sel.horizon = static_cast<std::size_t>(std::llround(peak->period));
  }
  require(sel.order >= 1 && sel.horizon >= 1, ErrorKind::InvalidInput,
          "pole order and forecast length must be >= 1");
  return sel;
}

inline ComparisonRow run_compare(const PriceSeries& p, const PipelineConfig& cfg) {
  const ReturnSeries returns = detail::staged("returns", [&] { return log_returns(p); });
  const OrderSelection sel = select_order(returns.values, cfg);

  const VolSeries vol = detail::staged("volatility", [&] {
    return historical_vol(returns, cfg.vol_window, cfg.vol_mode);
  });
  detail::staged("volatility", [&] {
    require(vol.size() >= 2 * sel.order + sel.horizon, ErrorKind::InsufficientData,
            "volatility series shorter than 2*order + forecast length");
  });

  const ArModel model = detail::staged("burg", [&] { return burg_fit(vol.values, sel.order); });
  const Forecast fc = detail::staged("forecast", [&] {
    return extrapolate(model, vol.values, sel.horizon, Direction::forward,
                       cfg.apply_offset);
  });
  const double garch_vol = detail::staged("garch", [&] {
    return garch_forecast(garch_fit(returns.values), returns.values);
  });

  ComparisonRow row;
  row.asset = p.asset_name;
  row.lpc_vol = std::max(0.0, fc.values.front());
  row.garch_vol = garch_vol;
  row.pole_order_used = sel.order;
  row.cycle_length = sel.cycle_length;
  row.hurst = cfg.hurst_h_for_rule;
  if (cfg.annualize_factor) {
    require(*cfg.annualize_factor > 0.0, ErrorKind::InvalidInput,
            "annualisation factor must be positive");
    const double s = std::sqrt(*cfg.annualize_factor);
    row.lpc_vol *= s;
    row.garch_vol *= s;
  }
  return row;
}

/// Runs every asset concurrently; rows come back in input order.
inline std::vector<ComparisonRow> run_compare_all(const std::vector<PriceSeries>& assets,
                                                  const PipelineConfig& cfg) {
  std::vector<std::future<ComparisonRow>> jobs;
  jobs.reserve(assets.size());
  for (const auto& a : assets) {
    jobs.push_back(std::async(std::launch::async, [&a, &cfg] { return run_compare(a, cfg); }));
  }
  std::vector<ComparisonRow> rows;
  rows.reserve(assets.size());
  for (auto& j : jobs) rows.push_back(j.get());
  return rows;
}

inline DiagnosticsReport run_diagnostics(const PriceSeries& p, const PipelineConfig& cfg) {
  const ReturnSeries returns = detail::staged("returns", [&] { return log_returns(p); });

  DiagnosticsReport rep;
  rep.asset = p.asset_name;
  rep.hurst = detail::staged("hurst", [&] {
    const auto path = cumulative_sum(returns.values);
    return hurst_estimate(path);
  });
  rep.metrics = detail::staged("fractal", [&] { return fractal_metrics(rep.hurst.h, 2); });

  rep.pareto_p = detail::staged("pareto", [&] {
    std::vector<double> mags(returns.values.size());
    for (std::size_t i = 0; i < mags.size(); ++i) mags[i] = std::abs(returns.values[i]);
    std::vector<double> sorted = mags;
    const auto mid = sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2);
    std::nth_element(sorted.begin(), mid, sorted.end());
    double median = *mid;
    if (sorted.size() % 2 == 0) {
      median = 0.5 * (median + *std::max_element(sorted.begin(), mid));
    }
    require(median > 0.0, ErrorKind::DegenerateSignal, "median absolute return is zero");
    std::vector<double> tail;
    for (double v : mags) {
      if (v >= median) tail.push_back(v);
    }
    return pareto_shape_mle(tail, median);
  });

  std::optional<OrderSelection> sel;
  try {
    sel = select_order(returns.values, cfg);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoPeak) throw;
  }
  if (sel) {
    rep.pole_order_used = sel->order;
    rep.horizon = sel->horizon;
    const VolSeries vol = detail::staged("volatility", [&] {
      return historical_vol(returns, cfg.vol_window, cfg.vol_mode);
    });
    rep.fb_score = detail::staged("fb_agreement", [&] {
      return fb_agreement(vol.values, sel->order, sel->horizon);
    });
  }
  return rep;
}

}  // namespace volburg
