#pragma once

// Seeded synthetic series with known generating parameters. Output is a pure
// function of (parameters, n, seed).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <variant>
#include <vector>

#include "volburg/detail/fft.hpp"
#include "volburg/error.hpp"
#include "volburg/rng.hpp"

namespace volburg {

struct GarchPath {
  std::vector<double> returns;
  std::vector<double> sigma2;  // conditional variance that generated returns[t]
};

/// True when the AR recursion x_t = sum_j c_j x_{t-j} + e_t is stationary,
/// checked by stepping the polynomial down to reflection coefficients.
inline bool is_stationary(std::span<const double> coeffs) {
  std::vector<double> a(coeffs.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = -coeffs[i];
  for (std::size_t m = a.size(); m >= 1; --m) {
    const double k = a[m - 1];
    if (!(std::abs(k) < 1.0)) return false;
    std::vector<double> prev(m - 1);
    const double denom = 1.0 - k * k;
    for (std::size_t i = 1; i < m; ++i) prev[i - 1] = (a[i - 1] - k * a[m - i - 1]) / denom;
    a = std::move(prev);
  }
  return true;
}

inline std::vector<double> gen_ar(std::span<const double> coeffs,
                                  double noise_sigma, std::size_t n,
                                  std::uint64_t seed) {
  require(noise_sigma >= 0.0, ErrorKind::InvalidInput, "noise sigma must be >= 0");
  require(n >= 1, ErrorKind::InvalidInput, "n must be >= 1");
  require(is_stationary(coeffs), ErrorKind::InvalidInput,
          "AR coefficients are not stationary");
  const std::size_t p = coeffs.size();
  const std::size_t burn = 10 * p;
  GaussianRng rng(seed);
  std::vector<double> x(burn + n, 0.0);
  for (std::size_t t = 0; t < x.size(); ++t) {
    double v = noise_sigma * rng.normal();
    for (std::size_t j = 1; j <= p && j <= t; ++j) v += coeffs[j - 1] * x[t - j];
    x[t] = v;
  }
  return {x.begin() + static_cast<std::ptrdiff_t>(burn), x.end()};
}

inline std::vector<double> gen_harmonic(std::span<const double> freqs,
                                        std::span<const double> amps,
                                        double noise_sigma, std::size_t n,
                                        std::uint64_t seed) {
  require(freqs.size() == amps.size(), ErrorKind::InvalidInput,
          "freqs and amps differ in length");
  require(noise_sigma >= 0.0, ErrorKind::InvalidInput, "noise sigma must be >= 0");
  for (double f : freqs) {
    require(f > 0.0 && f < 0.5, ErrorKind::InvalidInput,
            "frequency outside (0, 0.5)");
  }
  GaussianRng rng(seed);
  std::vector<double> x(n);
  for (std::size_t t = 0; t < n; ++t) {
    double v = 0.0;
    for (std::size_t k = 0; k < freqs.size(); ++k) {
      v += amps[k] * std::sin(2.0 * std::numbers::pi * freqs[k] * static_cast<double>(t));
    }
    x[t] = v + (noise_sigma > 0.0 ? noise_sigma * rng.normal() : 0.0);
  }
  return x;
}

inline constexpr std::size_t kGarchBurnIn = 500;

inline GarchPath gen_garch(double omega, double alpha, double beta,
                           std::size_t n, std::uint64_t seed) {
  require(omega > 0.0 && alpha >= 0.0 && beta >= 0.0 && alpha + beta < 1.0,
          ErrorKind::InvalidInput, "GARCH parameters violate constraints");
  require(n >= 1, ErrorKind::InvalidInput, "n must be >= 1");
  GaussianRng rng(seed);
  GarchPath out;
  out.returns.reserve(n);
  out.sigma2.reserve(n);
  double s2 = omega / (1.0 - alpha - beta);
  for (std::size_t t = 0; t < kGarchBurnIn + n; ++t) {
    const double r = std::sqrt(s2) * rng.normal();
    if (t >= kGarchBurnIn) {
      out.returns.push_back(r);
      out.sigma2.push_back(s2);
    }
    s2 = omega + alpha * r * r + beta * s2;
  }
  return out;
}

/// Autocovariance of unit-variance fractional Gaussian noise at lag k.
inline double fgn_autocovariance(double h, std::size_t k) {
  const double kk = static_cast<double>(k);
  const double e = 2.0 * h;
  return 0.5 * (std::pow(kk + 1.0, e) - 2.0 * std::pow(kk, e) +
                std::pow(std::abs(kk - 1.0), e));
}

/// Exact-covariance fractional Gaussian noise by circulant embedding.
inline std::vector<double> gen_fgn(double h, std::size_t n, std::uint64_t seed) {
  require(h > 0.0 && h < 1.0, ErrorKind::InvalidInput, "H must lie in (0, 1)");
  require(n >= 16, ErrorKind::InvalidInput, "fGn needs n >= 16");

  std::size_t half = 1;
  while (half < n - 1) half <<= 1;

  std::vector<std::complex<double>> eig;
  for (int attempt = 0;; ++attempt) {
    const std::size_t m = 2 * half;
    eig.assign(m, {});
    for (std::size_t j = 0; j <= half; ++j) eig[j] = fgn_autocovariance(h, j);
    for (std::size_t j = half + 1; j < m; ++j) eig[j] = eig[m - j];
    detail::fft_inplace(eig);

    double max_eig = 0.0;
    double min_eig = 0.0;
    for (const auto& z : eig) {
      max_eig = std::max(max_eig, z.real());
      min_eig = std::min(min_eig, z.real());
    }
    if (min_eig >= -1e-10 * max_eig) break;
    require(attempt == 0, ErrorKind::NumericalFailure,
            "circulant embedding is not non-negative definite");
    half <<= 1;
  }

  const std::size_t m = eig.size();
  GaussianRng rng(seed);
  std::vector<std::complex<double>> w(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double scale = std::sqrt(std::max(0.0, eig[k].real()) / static_cast<double>(m));
    const double re = rng.normal();
    const double im = rng.normal();
    w[k] = {scale * re, scale * im};
  }
  detail::fft_inplace(w);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = w[i].real();
  return out;
}

struct ArParams {
  std::vector<double> coeffs;
  double noise_sigma = 1.0;
};
struct HarmonicParams {
  std::vector<double> freqs;
  std::vector<double> amps;
  double noise_sigma = 0.0;
};
struct GarchParams {
  double omega = 1e-4;
  double alpha = 0.1;
  double beta = 0.85;
};
struct FgnParams {
  double h = 0.5;
};

enum class SynthKind { ar, harmonic, garch, fgn };

struct SynthSpec {
  std::variant<ArParams, HarmonicParams, GarchParams, FgnParams> params;
  std::size_t n = 0;
  std::uint64_t seed = 0;

  SynthKind kind() const noexcept { return static_cast<SynthKind>(params.index()); }
};

/// The generated series for any spec; for GARCH this is the return path.
inline std::vector<double> generate(const SynthSpec& spec) {
  struct Visitor {
    const SynthSpec& s;
    std::vector<double> operator()(const ArParams& p) const {
      return gen_ar(p.coeffs, p.noise_sigma, s.n, s.seed);
    }
    std::vector<double> operator()(const HarmonicParams& p) const {
      return gen_harmonic(p.freqs, p.amps, p.noise_sigma, s.n, s.seed);
    }
    std::vector<double> operator()(const GarchParams& p) const {
      return gen_garch(p.omega, p.alpha, p.beta, s.n, s.seed).returns;
    }
    std::vector<double> operator()(const FgnParams& p) const {
      return gen_fgn(p.h, s.n, s.seed);
    }
  };
  return std::visit(Visitor{spec}, spec.params);
}

}  // namespace volburg
