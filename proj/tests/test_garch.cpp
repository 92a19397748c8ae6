#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "test_util.hpp"
#include "volburg/garch.hpp"
#include "volburg/rng.hpp"
#include "volburg/synth.hpp"

namespace volburg {
namespace {

TEST(GarchLoglik, ConstantVarianceClosedForm) {
  GaussianRng rng(3);
  std::vector<double> r(250);
  for (double& v : r) v = 0.02 * rng.normal();
  const double w = testing::variance_of(r);
  double want = 0.0;
  for (double v : r) want += std::log(2.0 * std::numbers::pi) + std::log(w) + v * v / w;
  want *= -0.5;
  EXPECT_NEAR(garch_loglik(w, 0.0, 0.0, r), want, 1e-8);
}

TEST(GarchLoglik, ZeroReturnsAreGuarded) {
  const std::vector<double> r(50, 0.0);
  const double ll = garch_loglik(1e-6, 0.1, 0.8, r);
  EXPECT_TRUE(std::isfinite(ll));
}

TEST(GarchLoglik, RejectsInvalidParameters) {
  const std::vector<double> r(50, 0.01);
  for (auto [w, a, b] : {std::tuple{0.0, 0.1, 0.8}, {1e-4, -0.1, 0.8}, {1e-4, 0.3, 0.7}}) {
    try {
      garch_loglik(w, a, b, r);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::InvalidInput);
    }
  }
  const std::vector<double> tiny(5, 0.01);
  EXPECT_THROW(garch_loglik(1e-4, 0.1, 0.8, tiny), Error);
}

TEST(GarchVariancePath, BoundedBelowByOmega) {
  const auto sim = gen_garch(2e-5, 0.08, 0.9, 1000, 5);
  const auto s2 = garch_variance_path(2e-5, 0.08, 0.9, sim.returns);
  for (std::size_t t = 1; t < s2.size(); ++t) EXPECT_GE(s2[t], 2e-5);
}

TEST(GarchVariancePath, LongRunMeanMatchesUnconditionalVariance) {
  const double w = 1e-4;
  const double a = 0.1;
  const double b = 0.85;
  const auto sim = gen_garch(w, a, b, 20000, 8);
  const auto s2 = garch_variance_path(w, a, b, sim.returns);
  EXPECT_NEAR(testing::mean_of(s2), w / (1.0 - a - b), 0.1 * w / (1.0 - a - b));
}

TEST(GarchFit, RecoversPersistence) {
  const auto sim = gen_garch(1e-4, 0.1, 0.85, 5000, 2024);
  const auto m = garch_fit(sim.returns);
  EXPECT_NEAR(m.alpha + m.beta, 0.95, 0.05);
  EXPECT_LT(m.alpha + m.beta, 1.0);
  EXPECT_GT(m.omega, 0.0);
  EXPECT_EQ(m.n_obs, 5000u);
  for (const auto& [w, a, b] : garch_start_points(sim.returns)) {
    EXPECT_GE(m.log_lik, garch_loglik(w, a, b, sim.returns));
  }
  // Moving omega off the optimum lowers the likelihood.
  EXPECT_LT(garch_loglik(m.omega * 1.2, m.alpha, m.beta, sim.returns), m.log_lik);
  EXPECT_LT(garch_loglik(m.omega * 0.8, m.alpha, m.beta, sim.returns), m.log_lik);
}

TEST(GarchFit, WhiteNoiseHasNoArchEffect) {
  const double sigma = 0.015;
  GaussianRng rng(77);
  std::vector<double> r(5000);
  for (double& v : r) v = sigma * rng.normal();
  const auto m = garch_fit(r);
  EXPECT_LE(m.alpha, 0.05);
  EXPECT_NEAR(m.omega / (1.0 - m.beta), sigma * sigma, 0.2 * sigma * sigma);
}

TEST(GarchFit, ScaleEquivariance) {
  const auto sim = gen_garch(1e-4, 0.1, 0.85, 3000, 31);
  std::vector<double> scaled = sim.returns;
  for (double& v : scaled) v *= 10.0;
  const auto a = garch_fit(sim.returns);
  const auto b = garch_fit(scaled);
  EXPECT_NEAR(a.alpha, b.alpha, 1e-3);
  EXPECT_NEAR(a.beta, b.beta, 1e-3);
  EXPECT_NEAR(b.omega / (100.0 * a.omega), 1.0, 1e-3);
}

TEST(GarchFit, NeedsHundredReturns) {
  const std::vector<double> r(99, 0.01);
  try {
    garch_fit(r);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InsufficientData);
  }
}

TEST(GarchForecast, ConstantVarianceModel) {
  GarchModel m;
  m.omega = 4e-4;
  const std::vector<double> r{0.1, -0.3, 0.02};
  EXPECT_DOUBLE_EQ(garch_forecast(m, r), 0.02);
}

TEST(GarchForecast, NearUnitPersistenceCarriesLastVariance) {
  GarchModel m;
  m.omega = 1e-12;
  m.alpha = 0.0;
  m.beta = 0.999;
  const auto sim = gen_garch(1e-4, 0.1, 0.85, 500, 4);
  const auto s2 = garch_variance_path(m.omega, m.alpha, m.beta, sim.returns);
  EXPECT_NEAR(garch_forecast(m, sim.returns), std::sqrt(s2.back()), 1e-3 * std::sqrt(s2.back()));
}

TEST(GarchForecast, CloseToTrueNextSigma) {
  const double w = 1e-4;
  const double a = 0.1;
  const double b = 0.85;
  const auto sim = gen_garch(w, a, b, 5000, 2024);
  const auto m = garch_fit(sim.returns);
  const double last = sim.returns.back();
  const double truth = std::sqrt(w + a * last * last + b * sim.sigma2.back());
  EXPECT_NEAR(garch_forecast(m, sim.returns), truth, 0.25 * truth);
}

TEST(GarchForecast, EmptySeries) {
  const std::vector<double> none;
  EXPECT_THROW(garch_forecast(GarchModel{1e-4, 0.1, 0.8, 0, 1e-4, 0}, none), Error);
}

}  // namespace
}  // namespace volburg
