#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "volburg/pipeline.hpp"
#include "volburg/synth.hpp"

namespace volburg {
namespace {

PriceSeries from_returns(const std::vector<double>& r, double p0, std::string name) {
  PriceSeries p;
  p.asset_name = std::move(name);
  p.prices.push_back(p0);
  double acc = 0.0;
  for (double v : r) {
    acc += v;
    p.prices.push_back(p0 * std::exp(acc));
  }
  return p;
}

PriceSeries garch_asset(std::uint64_t seed) {
  return from_returns(gen_garch(1e-4, 0.1, 0.85, 3000, seed).returns, 100.0, "synthetic");
}

TEST(PipelineConfig, DefaultsEncodeProtocol) {
  const PipelineConfig cfg;
  EXPECT_EQ(cfg.vol_window, 13u);
  EXPECT_EQ(cfg.forecast_len, 64u);
  EXPECT_FALSE(cfg.pole_order_override.has_value());
  EXPECT_EQ(cfg.hurst_h_for_rule, 0.5);
  EXPECT_EQ(cfg.exploratory_order, 32u);
  EXPECT_EQ(cfg.ewma_lambda, 0.928571429);
  EXPECT_EQ(cfg.vol_mode, VolMode::paper_literal);
  EXPECT_TRUE(cfg.apply_offset);
  EXPECT_FALSE(cfg.annualize_factor.has_value());
}

TEST(RunCompare, LpcAndGarchAgreeOnGarchAsset) {
  const auto row = run_compare(garch_asset(1), PipelineConfig{});
  EXPECT_EQ(row.asset, "synthetic");
  EXPECT_GT(row.lpc_vol, 0.0);
  EXPECT_GT(row.garch_vol, 0.0);
  EXPECT_NEAR(row.lpc_vol / row.garch_vol, 1.0, 0.35);
  EXPECT_EQ(row.pole_order_used, pole_order(row.cycle_length, 0.5));
}

TEST(RunCompare, PaperParameterisation) {
  const auto cfg = paper_protocol_config();
  const auto asset = garch_asset(2);
  const auto returns = log_returns(asset);
  const auto sel = select_order(returns.values, cfg);
  EXPECT_EQ(sel.order, 128u);
  EXPECT_EQ(sel.horizon, 64u);
  const auto row = run_compare(asset, cfg);
  EXPECT_EQ(row.pole_order_used, 128u);

  const auto vol = historical_vol(returns, 13);
  const auto fc = extrapolate(burg_fit(vol.values, 128), vol.values, 64, Direction::forward, true);
  EXPECT_EQ(fc.values.size(), 64u);
  EXPECT_EQ(row.lpc_vol, fc.values.front());
}

TEST(RunCompare, ForecastLengthDoesNotMoveTheFirstStep) {
  auto cfg = paper_protocol_config();
  const auto asset = garch_asset(3);
  const auto a = run_compare(asset, cfg);
  cfg.forecast_len = 200;
  const auto b = run_compare(asset, cfg);
  EXPECT_EQ(a.lpc_vol, b.lpc_vol);
}

TEST(RunCompare, AutoForecastLengthFollowsCycle) {
  PipelineConfig cfg;
  cfg.forecast_len.reset();
  const auto returns = log_returns(garch_asset(4));
  const auto sel = select_order(returns.values, cfg);
  EXPECT_EQ(sel.horizon, static_cast<std::size_t>(std::llround(sel.cycle_length)));
}

TEST(RunCompare, DeterministicAndScaleFree) {
  const auto asset = garch_asset(5);
  PriceSeries scaled = asset;
  for (double& p : scaled.prices) p *= 37.0;
  const PipelineConfig cfg;
  const auto a = run_compare(asset, cfg);
  const auto b = run_compare(asset, cfg);
  const auto c = run_compare(scaled, cfg);
  EXPECT_EQ(a.lpc_vol, b.lpc_vol);
  EXPECT_EQ(a.garch_vol, b.garch_vol);
  EXPECT_NEAR(c.lpc_vol, a.lpc_vol, 1e-3 * a.lpc_vol);
  EXPECT_NEAR(c.garch_vol, a.garch_vol, 1e-3 * a.garch_vol);
}

TEST(RunCompare, Annualisation) {
  auto cfg = paper_protocol_config();
  const auto asset = garch_asset(6);
  const auto base = run_compare(asset, cfg);
  cfg.annualize_factor = 252.0;
  const auto ann = run_compare(asset, cfg);
  EXPECT_NEAR(ann.lpc_vol, base.lpc_vol * std::sqrt(252.0), 1e-12);
  EXPECT_NEAR(ann.garch_vol, base.garch_vol * std::sqrt(252.0), 1e-12);
}

TEST(RunCompare, ConstantPricesAreDegenerate) {
  PriceSeries flat;
  flat.asset_name = "flat";
  flat.prices.assign(2000, 10.0);
  for (const auto& cfg : {PipelineConfig{}, paper_protocol_config()}) {
    try {
      run_compare(flat, cfg);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::DegenerateSignal);
    }
  }
}

TEST(RunCompare, ShortSeriesIsTaggedWithStage) {
  const auto asset = from_returns(gen_garch(1e-4, 0.1, 0.85, 250, 9).returns, 100.0, "short");
  try {
    run_compare(asset, paper_protocol_config());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InsufficientData);
    EXPECT_EQ(std::string(e.what()).rfind("volatility:", 0), 0u) << e.what();
  }
}

TEST(RunCompareAll, KeepsInputOrder) {
  std::vector<PriceSeries> assets;
  for (std::uint64_t s = 10; s < 13; ++s) {
    assets.push_back(garch_asset(s));
    assets.back().asset_name = "a" + std::to_string(s);
  }
  const auto rows = run_compare_all(assets, paper_protocol_config());
  ASSERT_EQ(rows.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(rows[i].asset, assets[i].asset_name);
    EXPECT_EQ(rows[i].lpc_vol, run_compare(assets[i], paper_protocol_config()).lpc_vol);
  }
}

TEST(RunDiagnostics, QuasiGaussianAsset) {
  auto r = gen_fgn(0.5, 8192, 21);
  for (double& v : r) v *= 0.01;
  const auto asset = from_returns(r, 100.0, "fgn");
  const auto rep = run_diagnostics(asset, paper_protocol_config());
  EXPECT_NEAR(rep.metrics.alpha, 2.0, 0.15);
  EXPECT_NEAR(rep.metrics.beta, 2.0, 0.15);
  EXPECT_NEAR(rep.metrics.alpha * rep.hurst.h, 1.0, 1e-9);
  EXPECT_NEAR(rep.metrics.beta - 2.0 * rep.hurst.h, 1.0, 1e-9);
  EXPECT_GT(rep.pareto_p, 0.0);
  ASSERT_TRUE(rep.fb_score.has_value());
  EXPECT_GT(*rep.fb_score, 0.0);
  EXPECT_EQ(rep.pole_order_used, 128u);
}

}  // namespace
}  // namespace volburg
