#pragma once

// Burg maximum-entropy estimation of autoregressive (linear prediction)
// coefficients. The forward/backward error lattice is updated in place, so the
// Toeplitz normal equations are never formed. Cost is O(N * P).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "volburg/error.hpp"

namespace volburg {

/// Fitted AR model in prediction form: x_hat[n] = sum_j coeffs[j-1] * x[n-j]
/// on the demeaned signal.
struct ArModel {
  std::size_t order_p = 0;
  std::vector<double> coeffs;
  std::vector<double> reflection;
  double residual_power = 0.0;
  double signal_mean = 0.0;
  std::size_t n_samples = 0;
  // Set when the recursion stopped before the requested order because the
  // error energy vanished (an exactly predictable signal).
  bool truncated = false;
};

/// Forward and backward one-step prediction errors of a model on a signal.
struct PredictionErrors {
  std::vector<double> forward;
  std::vector<double> backward;
};

/// Error-energy floor below which the recursion is stopped.
inline constexpr double kBurgDenominatorFloor = 1e-30;

namespace detail {

inline std::vector<double> demeaned_checked(std::span<const double> x,
                                            std::size_t order, double& mean) {
  require(order >= 1, ErrorKind::InvalidInput, "AR order must be >= 1");
  require(x.size() >= 2 * order + 1, ErrorKind::InsufficientData,
          "Burg fit needs at least 2*order+1 samples");
  double sum = 0.0;
  for (double v : x) {
    require(std::isfinite(v), ErrorKind::InvalidInput, "non-finite sample");
    sum += v;
  }
  const bool constant =
      std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; });
  require(!constant, ErrorKind::DegenerateSignal, "constant input signal");

  mean = sum / static_cast<double>(x.size());
  std::vector<double> d(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] - mean;
  return d;
}

inline double initial_power(std::span<const double> d) {
  double e = 0.0;
  for (double v : d) e += v * v;
  return e / static_cast<double>(d.size());
}

inline ArModel snapshot(const std::vector<double>& a,
                        const std::vector<double>& k, double power, double mean,
                        std::size_t n) {
  ArModel m;
  m.order_p = a.size();
  m.coeffs.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) m.coeffs[i] = -a[i];
  m.reflection = k;
  m.residual_power = power;
  m.signal_mean = mean;
  m.n_samples = n;
  return m;
}

// Shared recursion behind burg_fit and fit_sequence. `a` holds the error
// filter taps a_1..a_m (the prediction coefficients are their negatives).
template <class StageSink>
ArModel burg_recursion(std::span<const double> x, std::size_t max_order,
                       StageSink&& on_stage) {
  double mean = 0.0;
  std::vector<double> f = demeaned_checked(x, max_order, mean);
  std::vector<double> b = f;
  const std::size_t n = f.size();

  std::vector<double> a;
  std::vector<double> k;
  std::vector<double> prev;
  a.reserve(max_order);
  k.reserve(max_order);
  double power = initial_power(f);

  for (std::size_t m = 1; m <= max_order; ++m) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t t = m; t < n; ++t) {
      num += f[t] * b[t - 1];
      den += f[t] * f[t] + b[t - 1] * b[t - 1];
    }
    if (den < kBurgDenominatorFloor) {
      require(m > 1, ErrorKind::DegenerateSignal, "zero error energy");
      ArModel out = snapshot(a, k, power, mean, n);
      out.truncated = true;
      return out;
    }
    const double km = std::clamp(-2.0 * num / den, -1.0, 1.0);

    for (std::size_t t = n - 1; t >= m; --t) {
      const double ft = f[t];
      f[t] = ft + km * b[t - 1];
      b[t] = b[t - 1] + km * ft;
    }

    prev = a;
    for (std::size_t i = 1; i < m; ++i) a[i - 1] = prev[i - 1] + km * prev[m - i - 1];
    a.push_back(km);
    k.push_back(km);
    power *= (1.0 - km * km);

    on_stage(a, k, power, mean, n);
  }
  return snapshot(a, k, power, mean, n);
}

}  // namespace detail

/// Fits an AR(order_p) model to `x` after removing its mean.
inline ArModel burg_fit(std::span<const double> x, std::size_t order_p) {
  return detail::burg_recursion(x, order_p, [](auto&&...) {});
}

/// One recursion pass returning the models of every order 1..max_order.
/// Shorter than max_order only if the recursion truncated.
inline std::vector<ArModel> fit_sequence(std::span<const double> x,
                                         std::size_t max_order) {
  std::vector<ArModel> out;
  out.reserve(max_order);
  detail::burg_recursion(x, max_order,
                         [&](const std::vector<double>& a,
                             const std::vector<double>& k, double power,
                             double mean, std::size_t n) {
                           out.push_back(detail::snapshot(a, k, power, mean, n));
                         });
  return out;
}

/// Literal stage-by-stage transcription of the lattice recursion with fresh
/// error vectors at every order. Slow; kept as a reference for burg_fit.
inline ArModel burg_fit_naive(std::span<const double> x, std::size_t order_p) {
  double mean = 0.0;
  const std::vector<double> d = detail::demeaned_checked(x, order_p, mean);
  const std::size_t n = d.size();

  // ef[t], eb[t] are the stage-(m-1) errors at absolute sample index t.
  std::vector<double> ef = d;
  std::vector<double> eb = d;
  std::vector<double> a;
  std::vector<double> k;
  double power = detail::initial_power(d);

  for (std::size_t m = 1; m <= order_p; ++m) {
    double cross = 0.0;
    double fwd_energy = 0.0;
    double bwd_energy = 0.0;
    for (std::size_t t = m; t < n; ++t) {
      cross += ef[t] * eb[t - 1];
      fwd_energy += ef[t] * ef[t];
      bwd_energy += eb[t - 1] * eb[t - 1];
    }
    const double den = fwd_energy + bwd_energy;
    if (den < kBurgDenominatorFloor) {
      require(m > 1, ErrorKind::DegenerateSignal, "zero error energy");
      ArModel out = detail::snapshot(a, k, power, mean, n);
      out.truncated = true;
      return out;
    }
    const double km = std::clamp(-2.0 * cross / den, -1.0, 1.0);

    std::vector<double> next_ef(n, 0.0);
    std::vector<double> next_eb(n, 0.0);
    for (std::size_t t = m; t < n; ++t) {
      next_ef[t] = ef[t] + km * eb[t - 1];
      next_eb[t] = eb[t - 1] + km * ef[t];
    }
    ef = std::move(next_ef);
    eb = std::move(next_eb);

    std::vector<double> next_a(m);
    for (std::size_t i = 1; i < m; ++i) next_a[i - 1] = a[i - 1] + km * a[m - i - 1];
    next_a[m - 1] = km;
    a = std::move(next_a);
    k.push_back(km);
    power *= (1.0 - km * km);
  }
  return detail::snapshot(a, k, power, mean, n);
}

/// Forward errors x[n] - sum_j c_j x[n-j] and backward errors
/// x[n] - sum_j c_j x[n+j] on the demeaned signal, using the same
/// coefficients in both directions. Both have x.size() - order_p entries.
inline PredictionErrors prediction_errors(const ArModel& model,
                                          std::span<const double> x) {
  const std::size_t p = model.order_p;
  require(x.size() > p, ErrorKind::InsufficientData,
          "series shorter than model order + 1");
  PredictionErrors e;
  const std::size_t len = x.size() - p;
  e.forward.resize(len);
  e.backward.resize(len);
  const double mu = model.signal_mean;
  for (std::size_t i = 0; i < len; ++i) {
    const std::size_t tf = i + p;
    double pf = 0.0;
    double pb = 0.0;
    for (std::size_t j = 1; j <= p; ++j) {
      pf += model.coeffs[j - 1] * (x[tf - j] - mu);
      pb += model.coeffs[j - 1] * (x[i + j] - mu);
    }
    e.forward[i] = (x[tf] - mu) - pf;
    e.backward[i] = (x[i] - mu) - pb;
  }
  return e;
}

}  // namespace volburg
