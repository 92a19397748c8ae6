#pragma once

// All-pole (maximum entropy) spectrum of a fitted AR model, dominant-cycle
// extraction and the cycle-length / Hurst pole-count rule.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <vector>

#include "volburg/burg.hpp"
#include "volburg/error.hpp"

namespace volburg {

inline constexpr std::size_t kDefaultSpectrumBins = 4096;
inline constexpr double kDefaultMinPeriod = 4.0;

struct Spectrum {
  std::vector<double> freqs;  // cycles per sample, uniform over [0, 0.5]
  std::vector<double> power;
  std::size_t order_p = 0;
  std::size_t n_bins = 0;
};

struct CyclePeak {
  double frequency = 0.0;
  double period = 0.0;
  double power = 0.0;
  std::size_t bin_index = 0;
};

/// power(f) = residual_power / |1 - sum_j c_j exp(-2 pi i f j)|^2
inline Spectrum mem_spectrum(const ArModel& model,
                             std::size_t n_bins = kDefaultSpectrumBins) {
  require(n_bins >= 16, ErrorKind::InvalidInput, "spectrum needs >= 16 bins");
  require(model.coeffs.size() == model.order_p, ErrorKind::InvalidInput,
          "model coefficient count differs from its order");
  Spectrum s;
  s.order_p = model.order_p;
  s.n_bins = n_bins;
  s.freqs.resize(n_bins);
  s.power.resize(n_bins);
  const double step = 0.5 / static_cast<double>(n_bins - 1);
  for (std::size_t i = 0; i < n_bins; ++i) {
    const double f = step * static_cast<double>(i);
    const double w = 2.0 * std::numbers::pi * f;
    double re = 1.0;
    double im = 0.0;
    for (std::size_t j = 1; j <= model.order_p; ++j) {
      const double c = model.coeffs[j - 1];
      re -= c * std::cos(w * static_cast<double>(j));
      im += c * std::sin(w * static_cast<double>(j));
    }
    s.freqs[i] = f;
    s.power[i] = model.residual_power / (re * re + im * im);
  }
  return s;
}

/// Highest local maximum (a plateau counts once, at its low-frequency end)
/// with period >= min_period, skipping the zero-frequency bin. Equal powers
/// resolve toward the longer cycle.
inline CyclePeak dominant_cycle(const Spectrum& s,
                                double min_period = kDefaultMinPeriod) {
  require(min_period >= 2.0, ErrorKind::InvalidInput, "min_period must be >= 2");
  require(s.freqs.size() == s.power.size() && s.power.size() >= 3,
          ErrorKind::InvalidInput, "malformed spectrum");
  const auto& p = s.power;
  const std::size_t n = p.size();

  std::optional<std::size_t> best;
  std::size_t i = 1;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && p[j + 1] == p[i]) ++j;
    const bool left_lower = p[i - 1] < p[i];
    const bool right_lower = (j + 1 == n) || p[j + 1] < p[j];
    const double f = s.freqs[i];
    if (left_lower && right_lower && f > 0.0 && 1.0 / f >= min_period) {
      if (!best || p[i] > p[*best]) best = i;
    }
    i = j + 1;
  }
  if (!best) fail(ErrorKind::NoPeak, "spectrum has no interior local maximum");

  CyclePeak peak;
  peak.bin_index = *best;
  peak.frequency = s.freqs[*best];
  peak.period = 1.0 / peak.frequency;
  peak.power = p[*best];
  return peak;
}

/// Number of poles from a cycle length and Hurst exponent, rounded half up.
inline std::size_t pole_order(double cycle_length, double h) {
  require(cycle_length >= 2.0 && std::isfinite(cycle_length),
          ErrorKind::InvalidInput, "cycle length must be >= 2");
  require(h > 0.0 && h <= 1.0, ErrorKind::InvalidInput, "h must lie in (0, 1]");
  const double m = std::floor(cycle_length / h + 0.5);
  return m < 1.0 ? 1 : static_cast<std::size_t>(m);
}

}  // namespace volburg
