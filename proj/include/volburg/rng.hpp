#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace volburg {

/// Reproducible Gaussian source: std::mt19937_64 (whose output sequence the
/// standard fixes) feeding a hand-rolled Box-Muller transform, since the
/// standard distributions are implementation-defined.
class GaussianRng {
 public:
  explicit GaussianRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on (0, 1) with 53 bits of resolution.
  double uniform() {
    const std::uint64_t bits = engine_() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace volburg
