#pragma once

// Zero-mean circular Gaussian node placement around a base station at the
// origin, and the Rayleigh law of the node-to-origin distance it induces.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <vector>

#include "pathloss/error.hpp"
#include "pathloss/random.hpp"

namespace pathloss {

/// Circular Gaussian drop: both axes zero-mean, uncorrelated, common SD.
class SpatialModel {
 public:
  explicit SpatialModel(double sigma_m) : sigma_(sigma_m) {
    detail::require(std::isfinite(sigma_m) && sigma_m > 0.0, "SpatialModel: sigma must be > 0");
  }

  double sigma() const noexcept { return sigma_; }

 private:
  double sigma_;
};

struct NodeSample {
  double x = 0.0;  // m
  double y = 0.0;  // m
  double r = 0.0;  // m, hypot(x, y)
};

inline double gaussian_pdf_2d(double x, double y, const SpatialModel& model) {
  const double s2 = model.sigma() * model.sigma();
  return std::exp(-(x * x + y * y) / (2.0 * s2)) / (2.0 * std::numbers::pi * s2);
}

inline double radial_pdf(double r, const SpatialModel& model) {
  detail::require(r >= 0.0, "radial_pdf: r must be >= 0");
  const double s2 = model.sigma() * model.sigma();
  return r / s2 * std::exp(-r * r / (2.0 * s2));
}

inline double radial_cdf(double r, const SpatialModel& model) {
  detail::require(r >= 0.0, "radial_cdf: r must be >= 0");
  const double s2 = model.sigma() * model.sigma();
  return -std::expm1(-r * r / (2.0 * s2));
}

/// Node number `index` of the drop keyed by `seed`.
inline NodeSample position_at(std::uint64_t seed, std::uint64_t index, const SpatialModel& model) {
  const CounterRng rx(seed, Stream::position_x);
  const CounterRng ry(seed, Stream::position_y);
  NodeSample s;
  s.x = model.sigma() * rx.normal(index);
  s.y = model.sigma() * ry.normal(index);
  s.r = std::sqrt(s.x * s.x + s.y * s.y);
  return s;
}

inline std::vector<NodeSample> sample_positions(std::size_t n, const SpatialModel& model,
                                                std::uint64_t seed) {
  detail::require(n >= 1, "sample_positions: n must be >= 1");
  std::vector<NodeSample> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = position_at(seed, i, model);
  return out;
}

}  // namespace pathloss
