#pragma once

// Seeded Monte Carlo oracle: drop nodes, apply the channel, and score the
// empirical loss distribution against the analytic one.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pathloss/channel.hpp"
#include "pathloss/density.hpp"
#include "pathloss/error.hpp"
#include "pathloss/spatial.hpp"

namespace pathloss {

struct SampleRecord {
  double x = 0.0;    // m
  double y = 0.0;    // m
  double r = 0.0;    // m
  double w = 0.0;    // dB, mean path loss at r
  double psi = 0.0;  // dB, shadowing
  double l = 0.0;    // dB, w + psi
};

struct SampleSet {
  std::uint64_t seed = 0;
  std::size_t n = 0;
  ChannelModel channel;
  SpatialModel spatial{1.0};
  std::vector<SampleRecord> records;

  std::vector<double> losses() const {
    std::vector<double> out(records.size());
    std::transform(records.begin(), records.end(), out.begin(),
                   [](const SampleRecord& rec) { return rec.l; });
    return out;
  }
};

inline SampleSet simulate(const ChannelModel& channel, const SpatialModel& spatial, std::size_t n,
                          std::uint64_t seed) {
  detail::require(n >= 1, "simulate: n must be >= 1");
  channel.validate();
  SampleSet set{seed, n, channel, spatial, {}};
  set.records.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto node = position_at(seed, i, spatial);
    auto& rec = set.records[i];
    rec.x = node.x;
    rec.y = node.y;
    rec.r = node.r;
    rec.w = mean_path_loss(node.r, channel);
    rec.psi = shadowing_at(seed, i, channel);
    rec.l = rec.w + rec.psi;
  }
  return set;
}

struct HistogramBin {
  double center = 0.0;
  double density = 0.0;
};

/// Equal-width histogram over [min, max] scaled to a density (count / (n width)).
inline std::vector<HistogramBin> empirical_pdf(std::span<const double> values, std::size_t bins) {
  detail::require(!values.empty(), "empirical_pdf: no samples");
  detail::require(bins >= 2, "empirical_pdf: bins must be >= 2");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!(hi > lo)) throw std::invalid_argument("empirical_pdf: degenerate sample range (all values equal)");
  const double width = (hi - lo) / static_cast<double>(bins);
  std::vector<std::size_t> counts(bins, 0);
  for (double v : values) {
    auto idx = static_cast<std::size_t>((v - lo) / width);
    counts[std::min(idx, bins - 1)] += 1;
  }
  const double norm = 1.0 / (static_cast<double>(values.size()) * width);
  std::vector<HistogramBin> out(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    out[b].center = lo + (static_cast<double>(b) + 0.5) * width;
    out[b].density = static_cast<double>(counts[b]) * norm;
  }
  return out;
}

inline std::vector<HistogramBin> empirical_pdf(const SampleSet& samples, std::size_t bins) {
  const auto l = samples.losses();
  return empirical_pdf(std::span<const double>(l), bins);
}

/// Kolmogorov-Smirnov distance between the sample ECDF and `cdf`.
inline double ks_statistic(std::span<const double> values, const std::function<double(double)>& cdf) {
  detail::require(!values.empty(), "ks_statistic: no samples");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    const double above = std::abs(static_cast<double>(i + 1) / n - f);
    const double below = std::abs(static_cast<double>(i) / n - f);
    d = std::max({d, above, below});
  }
  return d;
}

inline double ks_statistic(const SampleSet& samples, const std::function<double(double)>& cdf) {
  const auto l = samples.losses();
  return ks_statistic(std::span<const double>(l), cdf);
}

/// Asymptotic 1% critical value of the one-sample KS statistic.
inline double ks_critical_1pct(std::size_t n) { return 1.63 / std::sqrt(static_cast<double>(n)); }

/// Rice rule.
inline std::size_t default_bins(std::size_t n) {
  return static_cast<std::size_t>(std::ceil(2.0 * std::cbrt(static_cast<double>(n))));
}

struct ComparisonBin {
  double center = 0.0;
  double empirical = 0.0;
  double analytic = 0.0;
};

struct ComparisonReport {
  std::string channel_name;
  double sigma_m = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double ks_statistic = 0.0;
  double cdf_sup_norm = 0.0;  // ECDF vs analytic CDF on the bin edges
  double ks_threshold = 0.0;
  bool passed = false;
  double mass_inside_close_in = 0.0;
  std::vector<ComparisonBin> bins;
};

inline ComparisonReport validate(const ChannelModel& channel, const SpatialModel& spatial,
                                 std::size_t n, std::uint64_t seed,
                                 std::optional<std::size_t> bins = std::nullopt,
                                 std::optional<double> ks_threshold = std::nullopt) {
  const auto samples = simulate(channel, spatial, n, seed);
  auto losses = samples.losses();
  std::sort(losses.begin(), losses.end());
  const std::span<const double> sorted(losses);

  ComparisonReport report;
  report.channel_name = channel.name;
  report.sigma_m = spatial.sigma();
  report.n = n;
  report.seed = seed;
  report.ks_threshold = ks_threshold.value_or(ks_critical_1pct(n));
  report.mass_inside_close_in = mass_inside_close_in(channel, spatial);

  const auto cdf = [&](double l) { return pl_cdf(l, channel, spatial).value; };
  report.ks_statistic = ks_statistic(sorted, cdf);
  report.passed = report.ks_statistic < report.ks_threshold;

  const auto hist = empirical_pdf(sorted, bins.value_or(default_bins(n)));
  report.bins.reserve(hist.size());
  for (const auto& bin : hist) {
    report.bins.push_back({bin.center, bin.density, pl_pdf(bin.center, channel, spatial).value});
  }

  // ECDF vs CDF at the histogram edges.
  const double width = hist.size() > 1 ? hist[1].center - hist[0].center : 0.0;
  for (std::size_t e = 0; e <= hist.size(); ++e) {
    const double edge = hist.front().center - 0.5 * width + static_cast<double>(e) * width;
    const auto below = std::upper_bound(sorted.begin(), sorted.end(), edge) - sorted.begin();
    const double ecdf = static_cast<double>(below) / static_cast<double>(n);
    report.cdf_sup_norm = std::max(report.cdf_sup_norm, std::abs(ecdf - cdf(edge)));
  }
  return report;
}

}  // namespace pathloss
