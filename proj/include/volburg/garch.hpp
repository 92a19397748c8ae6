#pragma once

// GARCH(1,1) baseline: sigma2[t] = omega + alpha * r[t-1]^2 + beta * sigma2[t-1]
// with zero conditional mean, fitted by Gaussian quasi-maximum likelihood.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "volburg/detail/nelder_mead.hpp"
#include "volburg/error.hpp"

namespace volburg {

struct GarchModel {
  double omega = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double log_lik = 0.0;
  double sigma2_0 = 0.0;
  std::size_t n_obs = 0;
};

inline constexpr double kGarchVarianceFloor = 1e-12;
inline constexpr double kGarchMaxPersistence = 0.9999;

namespace detail {

inline double initial_variance(std::span<const double> r) {
  if (r.size() < 2) return kGarchVarianceFloor;
  double mean = 0.0;
  for (double v : r) mean += v;
  mean /= static_cast<double>(r.size());
  double ss = 0.0;
  for (double v : r) ss += (v - mean) * (v - mean);
  return std::max(ss / static_cast<double>(r.size() - 1), kGarchVarianceFloor);
}

inline void check_params(double omega, double alpha, double beta) {
  require(std::isfinite(omega) && omega > 0.0, ErrorKind::InvalidInput,
          "omega must be positive");
  require(alpha >= 0.0 && beta >= 0.0, ErrorKind::InvalidInput,
          "alpha and beta must be non-negative");
  require(alpha + beta < 1.0, ErrorKind::InvalidInput,
          "alpha + beta must be below 1");
}

inline double logistic(double u) { return 1.0 / (1.0 + std::exp(-u)); }
inline double logit(double p) { return std::log(p / (1.0 - p)); }

// theta = (log omega, u_persistence, u_share) -> (omega, alpha, beta)
inline std::array<double, 3> from_unconstrained(std::span<const double> th) {
  const double persistence = kGarchMaxPersistence * logistic(th[1]);
  const double share = logistic(th[2]);
  return {std::exp(th[0]), persistence * share, persistence * (1.0 - share)};
}

inline std::vector<double> to_unconstrained(double omega, double alpha, double beta) {
  const double persistence = alpha + beta;
  return {std::log(omega), logit(persistence / kGarchMaxPersistence),
          logit(alpha / persistence)};
}

}  // namespace detail

/// Conditional variances sigma2[0..n-1] for the sample, seeded with the
/// sample variance of r (floored at 1e-12).
inline std::vector<double> garch_variance_path(double omega, double alpha,
                                               double beta,
                                               std::span<const double> r) {
  detail::check_params(omega, alpha, beta);
  require(!r.empty(), ErrorKind::InsufficientData, "empty return series");
  std::vector<double> s2(r.size());
  s2[0] = detail::initial_variance(r);
  for (std::size_t t = 1; t < r.size(); ++t) {
    s2[t] = omega + alpha * r[t - 1] * r[t - 1] + beta * s2[t - 1];
  }
  return s2;
}

inline double garch_loglik(double omega, double alpha, double beta,
                           std::span<const double> r) {
  require(r.size() >= 10, ErrorKind::InsufficientData,
          "GARCH likelihood needs at least 10 returns");
  const auto s2 = garch_variance_path(omega, alpha, beta, r);
  const double log2pi = std::log(2.0 * std::numbers::pi);
  double ll = 0.0;
  for (std::size_t t = 0; t < r.size(); ++t) {
    if (!(s2[t] > 0.0) || !std::isfinite(s2[t])) {
      fail(ErrorKind::NumericalFailure, "non-positive conditional variance");
    }
    ll += log2pi + std::log(s2[t]) + r[t] * r[t] / s2[t];
  }
  require(std::isfinite(ll), ErrorKind::NumericalFailure, "non-finite likelihood");
  return -0.5 * ll;
}

/// (alpha, beta) pairs for the multi-start search; omega is set from the
/// sample variance so each start has the data's unconditional variance.
inline constexpr std::array<std::array<double, 2>, 5> kGarchStarts{{
    {0.05, 0.90},
    {0.10, 0.85},
    {0.15, 0.75},
    {0.05, 0.60},
    {0.20, 0.50},
}};

/// Starting parameter triples (omega, alpha, beta) used by garch_fit on r.
inline std::vector<std::array<double, 3>> garch_start_points(std::span<const double> r) {
  const double var = detail::initial_variance(r);
  std::vector<std::array<double, 3>> out;
  for (const auto& [a, b] : kGarchStarts) out.push_back({var * (1.0 - a - b), a, b});
  return out;
}

inline GarchModel garch_fit(std::span<const double> r) {
  require(r.size() >= 100, ErrorKind::InsufficientData,
          "GARCH fit needs at least 100 returns");
  auto objective = [&](const std::vector<double>& th) {
    const auto [w, a, b] = detail::from_unconstrained(th);
    try {
      return -garch_loglik(w, a, b, r);
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  bool found = false;
  GarchModel best;
  for (const auto& [w0, a0, b0] : garch_start_points(r)) {
    const auto res = detail::nelder_mead(objective, detail::to_unconstrained(w0, a0, b0),
                                         0.5, 1e-8, 2000);
    if (!std::isfinite(res.fx)) continue;
    if (!found || -res.fx > best.log_lik) {
      const auto [w, a, b] = detail::from_unconstrained(res.x);
      best.omega = w;
      best.alpha = a;
      best.beta = b;
      best.log_lik = -res.fx;
      found = true;
    }
  }
  require(found, ErrorKind::NumericalFailure, "every GARCH start failed");
  best.sigma2_0 = detail::initial_variance(r);
  best.n_obs = r.size();
  return best;
}

/// One-step-ahead volatility sqrt(omega + alpha r_T^2 + beta sigma2_T).
inline double garch_forecast(const GarchModel& m, std::span<const double> r) {
  require(!r.empty(), ErrorKind::InsufficientData, "empty return series");
  const auto s2 = garch_variance_path(m.omega, m.alpha, m.beta, r);
  const double last = r.back();
  return std::sqrt(m.omega + m.alpha * last * last + m.beta * s2.back());
}

}  // namespace volburg
