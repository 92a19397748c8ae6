#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

namespace volburg::detail {

struct SimplexResult {
  std::vector<double> x;
  double fx = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Nelder-Mead minimisation with the standard coefficients (reflect 1,
/// expand 2, contract 0.5, shrink 0.5). Stops when the largest vertex
/// distance from the best vertex falls below `size_tol`.
template <class F>
SimplexResult nelder_mead(F&& f, std::vector<double> x0, double step,
                          double size_tol, int max_iter) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> v(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) v[i + 1][i] += step;
  std::vector<double> fv(n + 1);
  for (std::size_t i = 0; i <= n; ++i) fv[i] = f(v[i]);

  std::vector<std::size_t> idx(n + 1);
  auto order = [&] {
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    std::vector<std::vector<double>> v2(n + 1);
    std::vector<double> f2(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      v2[i] = std::move(v[idx[i]]);
      f2[i] = fv[idx[i]];
    }
    v = std::move(v2);
    fv = std::move(f2);
  };
  auto along = [&](const std::vector<double>& c, const std::vector<double>& p,
                   double t) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = c[i] + t * (p[i] - c[i]);
    return out;
  };

  SimplexResult res;
  int it = 0;
  for (; it < max_iter; ++it) {
    order();
    double size = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
      for (std::size_t i = 0; i < n; ++i) size = std::max(size, std::abs(v[j][i] - v[0][i]));
    }
    if (size < size_tol) {
      res.converged = true;
      break;
    }

    std::vector<double> c(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) c[i] += v[j][i];
    }
    for (double& ci : c) ci /= static_cast<double>(n);

    const auto xr = along(c, v[n], -1.0);
    const double fr = f(xr);
    if (fr < fv[0]) {
      const auto xe = along(c, v[n], -2.0);
      const double fe = f(xe);
      if (fe < fr) {
        v[n] = xe;
        fv[n] = fe;
      } else {
        v[n] = xr;
        fv[n] = fr;
      }
      continue;
    }
    if (fr < fv[n - 1]) {
      v[n] = xr;
      fv[n] = fr;
      continue;
    }
    // Outside contraction when the reflection beat the worst vertex.
    const bool outside = fr < fv[n];
    const auto xc = outside ? along(c, xr, 0.5) : along(c, v[n], 0.5);
    const double fc = f(xc);
    if (fc < (outside ? fr : fv[n])) {
      v[n] = xc;
      fv[n] = fc;
      continue;
    }
    for (std::size_t j = 1; j <= n; ++j) {
      v[j] = along(v[0], v[j], 0.5);
      fv[j] = f(v[j]);
    }
  }
  order();
  res.x = v[0];
  res.fx = fv[0];
  res.iterations = it;
  return res;
}

}  // namespace volburg::detail
