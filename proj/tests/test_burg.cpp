#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "test_util.hpp"
#include "volburg/burg.hpp"
#include "volburg/rng.hpp"
#include "volburg/synth.hpp"

namespace volburg {
namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorKind::IoError;
}

TEST(BurgFit, HandComputedOrderOne) {
  // demeaned [-1.5, -0.5, 1.5, 0.5]: k = -2 * 0.75 / 7.5
  const std::vector<double> x{1, 2, 4, 3};
  const auto m = burg_fit(x, 1);
  EXPECT_EQ(m.order_p, 1u);
  EXPECT_NEAR(m.reflection[0], -0.2, 1e-15);
  EXPECT_NEAR(m.coeffs[0], 0.2, 1e-15);
  EXPECT_NEAR(m.signal_mean, 2.5, 1e-15);
  EXPECT_NEAR(m.residual_power, 1.25 * 0.96, 1e-15);
  EXPECT_EQ(m.n_samples, 4u);
}

TEST(BurgFit, RecoversAr1Coefficient) {
  const std::vector<double> phi{0.9};
  const auto x = gen_ar(phi, 0.1, 1024, 42);
  const auto m = burg_fit(x, 1);
  EXPECT_NEAR(m.coeffs[0], 0.9, 0.05);
}

TEST(BurgFit, ResidualPowerNearInnovationVariance) {
  const std::vector<double> phi{0.6, -0.2, 0.1};
  const double sigma = 0.5;
  const auto x = gen_ar(phi, sigma, 4096, 9);
  const auto m = burg_fit(x, 3);
  EXPECT_NEAR(m.residual_power, sigma * sigma, 0.2 * sigma * sigma);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(m.coeffs[i], phi[i], 0.06);
}

TEST(BurgFit, Preconditions) {
  const std::vector<double> shortx{1, 2, 3, 4};
  EXPECT_EQ(kind_of([&] { burg_fit(shortx, 2); }), ErrorKind::InsufficientData);
  EXPECT_EQ(kind_of([&] { burg_fit(shortx, 0); }), ErrorKind::InvalidInput);
  const std::vector<double> flat(50, 3.0);
  EXPECT_EQ(kind_of([&] { burg_fit(flat, 2); }), ErrorKind::DegenerateSignal);
  EXPECT_EQ(kind_of([&] { burg_fit_naive(flat, 2); }), ErrorKind::DegenerateSignal);
}

TEST(BurgFit, ExactlyPredictableSignalTruncates) {
  std::vector<double> alt(64);
  for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = (i % 2 == 0) ? 1.0 : -1.0;
  const auto m = burg_fit(alt, 4);
  EXPECT_TRUE(m.truncated);
  ASSERT_EQ(m.order_p, 1u);
  EXPECT_DOUBLE_EQ(m.coeffs[0], -1.0);
  EXPECT_EQ(fit_sequence(alt, 4).size(), 1u);
}

TEST(BurgFit, ShiftAndScaleInvariance) {
  const std::vector<double> phi{0.5, -0.3};
  const auto x = gen_ar(phi, 1.0, 512, 21);
  std::vector<double> shifted = x;
  std::vector<double> scaled = x;
  for (double& v : shifted) v += 12.5;
  for (double& v : scaled) v *= 3.0;
  const auto a = burg_fit(x, 6);
  const auto b = burg_fit(shifted, 6);
  const auto c = burg_fit(scaled, 6);
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_NEAR(a.coeffs[i], b.coeffs[i], 1e-12);
    EXPECT_NEAR(a.coeffs[i], c.coeffs[i], 1e-12);
    EXPECT_NEAR(a.reflection[i], c.reflection[i], 1e-12);
  }
  EXPECT_NEAR(c.residual_power, 9.0 * a.residual_power, 1e-12 * c.residual_power);
}

TEST(FitSequence, LengthMonotonicityAndBitEquality) {
  const std::vector<double> phi{0.4, 0.2, -0.3};
  const auto x = gen_ar(phi, 1.0, 256, 5);
  const auto seq = fit_sequence(x, 8);
  ASSERT_EQ(seq.size(), 8u);
  for (std::size_t p = 0; p < seq.size(); ++p) {
    EXPECT_EQ(seq[p].order_p, p + 1);
    if (p > 0) {
      EXPECT_LE(seq[p].residual_power, seq[p - 1].residual_power);
    }
    const auto single = burg_fit(x, p + 1);
    EXPECT_EQ(seq[p].coeffs, single.coeffs);
    EXPECT_EQ(seq[p].reflection, single.reflection);
    EXPECT_EQ(seq[p].residual_power, single.residual_power);
  }
}

TEST(FitSequence, ReflectionsBoundedOnRandomInputs) {
  GaussianRng rng(1234);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> x(64 + 16 * trial);
    double level = 0.0;
    for (double& v : x) {
      level += rng.normal();
      v = (trial % 2 == 0) ? rng.normal() : level;
    }
    const auto seq = fit_sequence(x, 12);
    for (std::size_t p = 0; p < seq.size(); ++p) {
      EXPECT_LE(std::abs(seq[p].reflection[p]), 1.0);
      if (p > 0) {
      EXPECT_LE(seq[p].residual_power, seq[p - 1].residual_power);
    }
    }
  }
}

TEST(BurgFitNaive, AgreesWithFastRecursion) {
  const std::vector<double> phi{0.5, -0.3};
  const auto ar = gen_ar(phi, 1.0, 128, 7);
  const auto fgn = gen_fgn(0.7, 256, 3);
  for (const auto* x : {&ar, &fgn}) {
    for (std::size_t p : {1u, 2u, 5u, 16u}) {
      const auto fast = burg_fit(*x, p);
      const auto slow = burg_fit_naive(*x, p);
      ASSERT_EQ(fast.order_p, slow.order_p);
      for (std::size_t i = 0; i < p; ++i) {
        EXPECT_NEAR(fast.coeffs[i], slow.coeffs[i], 1e-10);
        EXPECT_NEAR(fast.reflection[i], slow.reflection[i], 1e-10);
      }
      EXPECT_NEAR(fast.residual_power, slow.residual_power, 1e-10);
    }
  }
}

TEST(PredictionErrors, ForwardAndBackwardVanishOnExactRecursion) {
  std::vector<double> x(40);
  x[0] = 1024.0;
  for (std::size_t t = 1; t < x.size(); ++t) x[t] = 0.5 * x[t - 1];
  ArModel m;
  m.order_p = 1;
  m.coeffs = {0.5};
  m.reflection = {-0.5};
  const auto e = prediction_errors(m, x);
  ASSERT_EQ(e.forward.size(), e.backward.size());
  for (double v : e.forward) EXPECT_NEAR(v, 0.0, 1e-12);
  // Backward errors x[n] - 0.5 x[n+1] = 0.75 x[n] are not zero: the
  // recursion is only time-symmetric for stationary signals.
  EXPECT_NEAR(e.backward[0], 0.75 * 1024.0, 1e-9);
}

}  // namespace
}  // namespace volburg
