#pragma once

// Large-scale channel: mean path loss W = alpha + beta log10(r / r0) plus
// zero-mean Gaussian shadowing Psi (dB), and the IEEE 802.20 preset table.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pathloss/error.hpp"
#include "pathloss/random.hpp"
#include "pathloss/spatial.hpp"

namespace pathloss {

struct ChannelModel {
  std::string name;
  double alpha_eff = 0.0;  // dB at r = r0
  double beta = 0.0;       // dB per decade
  double r0 = 1.0;         // m
  double sigma_psi = 0.0;  // dB
  std::optional<std::pair<double, double>> cell_radius_range;  // m, informational only
  bool sigma_psi_assumed = false;  // shadowing SD is a documented default, not a table value

  /// Build from an intercept referenced to r = 1 m, PL = alpha_hat + beta log10(r).
  static ChannelModel from_alpha_hat(std::string name, double alpha_hat, double beta, double r0,
                                     double sigma_psi) {
    ChannelModel m{.name = std::move(name), .alpha_eff = alpha_hat + beta * std::log10(r0), .beta = beta,
                   .r0 = r0, .sigma_psi = sigma_psi, .cell_radius_range = {}, .sigma_psi_assumed = false};
    m.validate();
    return m;
  }

  void validate() const {
    detail::require(std::isfinite(alpha_eff), "ChannelModel: alpha must be finite");
    detail::require(std::isfinite(beta) && beta > 0.0, "ChannelModel: beta must be > 0");
    detail::require(std::isfinite(r0) && r0 > 0.0, "ChannelModel: r0 must be > 0");
    detail::require(std::isfinite(sigma_psi) && sigma_psi >= 0.0,
                    "ChannelModel: sigma_psi must be >= 0");
  }

  /// Intercept referenced to 1 m.
  double alpha_hat() const { return alpha_eff - beta * std::log10(r0); }
};

inline double mean_path_loss(double r, const ChannelModel& model) {
  detail::require(r > 0.0, "mean_path_loss: r must be > 0");
  return model.alpha_eff + model.beta * std::log10(r / model.r0);
}

/// Distance at which the mean path loss equals w.
inline double distance_for_loss(double w, const ChannelModel& model) {
  return model.r0 * std::pow(10.0, (w - model.alpha_eff) / model.beta);
}

inline double shadowing_at(std::uint64_t seed, std::uint64_t index, const ChannelModel& model) {
  if (model.sigma_psi == 0.0) return 0.0;
  return model.sigma_psi * CounterRng(seed, Stream::shadowing).normal(index);
}

inline std::vector<double> sample_shadowing(std::size_t n, const ChannelModel& model,
                                            std::uint64_t seed) {
  detail::require(n >= 1, "sample_shadowing: n must be >= 1");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = shadowing_at(seed, i, model);
  return out;
}

/// Density of the deterministic part W = alpha + beta log10(R / r0), R Rayleigh.
inline double w_pdf(double w, const ChannelModel& model, const SpatialModel& spatial) {
  const double s2 = spatial.sigma() * spatial.sigma();
  // y = R^2 / (2 sigma^2) at the distance producing loss w.
  const double y = model.r0 * model.r0 * std::pow(10.0, 2.0 * (w - model.alpha_eff) / model.beta) /
                   (2.0 * s2);
  if (!std::isfinite(y)) return 0.0;
  return 2.0 * std::numbers::ln10 / model.beta * y * std::exp(-y);
}

/// P(W <= w).
inline double w_cdf(double w, const ChannelModel& model, const SpatialModel& spatial) {
  const double s2 = spatial.sigma() * spatial.sigma();
  const double y = model.r0 * model.r0 * std::pow(10.0, 2.0 * (w - model.alpha_eff) / model.beta) /
                   (2.0 * s2);
  if (!std::isfinite(y)) return 1.0;
  return -std::expm1(-y);
}

// Table II of the 802.20 channel models document at 1.9 GHz. The intercepts
// are referenced to 1 m; r0 is the lower end of the supported distances.
// The microcell shadowing SDs are not listed there and default to 10 dB.
inline constexpr std::array<std::string_view, 4> kPresetNames = {
    "suburban_macro", "urban_macro", "urban_micro_nlos", "urban_micro_los"};

inline constexpr double kAssumedMicroShadowingDb = 10.0;

inline ChannelModel preset(std::string_view name) {
  struct Row {
    std::string_view name;
    double alpha_hat, beta, r0, sigma_psi;
    double cell_min_m, cell_max_m;
    bool assumed;
  };
  static constexpr std::array<Row, 4> rows{{
      {"suburban_macro", 31.5, 35.0, 35.0, 10.0, 600.0, 3500.0, false},
      {"urban_macro", 34.5, 35.0, 35.0, 10.0, 600.0, 3500.0, false},
      {"urban_micro_nlos", 34.53, 38.0, 20.0, kAssumedMicroShadowingDb, 200.0, 300.0, true},
      {"urban_micro_los", 30.18, 26.0, 20.0, kAssumedMicroShadowingDb, 200.0, 300.0, true},
  }};
  for (const auto& row : rows) {
    if (row.name != name) continue;
    auto m = ChannelModel::from_alpha_hat(std::string(row.name), row.alpha_hat, row.beta, row.r0,
                                          row.sigma_psi);
    m.cell_radius_range = std::pair{row.cell_min_m, row.cell_max_m};
    m.sigma_psi_assumed = row.assumed;
    return m;
  }
  std::string valid;
  for (auto n : kPresetNames) {
    if (!valid.empty()) valid += ", ";
    valid += n;
  }
  throw std::invalid_argument("unknown preset '" + std::string(name) + "'; valid names: " + valid);
}

}  // namespace pathloss
