#pragma once

// Exact distribution of the total loss L = W + Psi for circular Gaussian
// node drops.
//
// The convolution of the W density with the shadowing kernel reduces to
//   f_L(l) = P(l) * I(a, b, c),   I(a, b, c) = int exp(-a x^2 - b 10^(c x)) dx
// with a = 1 / (2 sigma_psi^2), c = 2 / beta,
//   b = (r0^2 / 2 sigma^2) 10^(2 (beta (l - alpha) + 2 ln10 sigma_psi^2) / beta^2),
//   P(l) = r0^2 ln10 / (sqrt(2 pi) beta sigma^2 sigma_psi) 10^(2 (l - alpha) / beta)
//          exp((sqrt(2) sigma_psi ln10 / beta)^2).
// I is evaluated either by quadrature or by its Taylor/Gaussian-moment series
//   I = e^-b sqrt(pi/a) {1 + sum_k sum_j pi(2k,j)/k! s^(2k) (-b)^(j+1)},
//   s = c ln10 / (2 sqrt(a)).
// The series is asymptotic rather than convergent: for s^2 much above 0.1 and
// b near 1 its terms start growing before the sum settles, which is reported
// as series_divergence. Quadrature is the reference route.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>

#include "pathloss/channel.hpp"
#include "pathloss/coefficients.hpp"
#include "pathloss/error.hpp"
#include "pathloss/integrate.hpp"
#include "pathloss/spatial.hpp"

namespace pathloss {

struct QuadratureConfig {
  double target_rel_error = 1e-9;
  int max_refinements = 14;
  double truncation_radius = 12.0;  // in units of the Gaussian kernel SD

  void validate() const {
    detail::require(target_rel_error > 0.0 && target_rel_error <= 1e-3,
                    "QuadratureConfig: target_rel_error must be in (0, 1e-3]");
    detail::require(max_refinements >= 1, "QuadratureConfig: max_refinements must be >= 1");
    detail::require(truncation_radius >= 8.0, "QuadratureConfig: truncation_radius must be >= 8");
  }
};

struct SeriesConfig {
  int max_terms = 9;
  double term_rel_tolerance = 1e-12;
  double b_max = 1.0;

  void validate() const {
    detail::require(max_terms >= 1, "SeriesConfig: max_terms must be >= 1");
    detail::require(term_rel_tolerance > 0.0, "SeriesConfig: term_rel_tolerance must be > 0");
    detail::require(b_max > 0.0, "SeriesConfig: b_max must be > 0");
  }
};

enum class Method { series, quadrature };
enum class MethodChoice { automatic, series, quadrature };

inline std::string_view to_string(Method m) {
  return m == Method::series ? "series" : "quadrature";
}

inline MethodChoice parse_method(std::string_view text) {
  if (text == "auto") return MethodChoice::automatic;
  if (text == "series") return MethodChoice::series;
  if (text == "quadrature") return MethodChoice::quadrature;
  throw std::invalid_argument("unknown method '" + std::string(text) +
                              "'; expected auto, series or quadrature");
}

struct DensityResult {
  double value = 0.0;
  Method method = Method::quadrature;
  double est_error = 0.0;
  int terms_or_nodes_used = 0;
  bool clamped = false;  // a negative truncated series value was clamped to zero
};

struct Moments {
  double mean = 0.0;      // dB
  double variance = 0.0;  // dB^2
};

/// Parameters of the shared integral I(a, b, c) for one loss value.
struct IntegralForm {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

// --- shared integral -------------------------------------------------------

namespace detail {

struct SeriesOutcome {
  double value = 0.0;
  double est_error = 0.0;
  int terms = 0;
};

// Shape of the integrand after x = t / sqrt(a): exp(-t^2 - b exp(lambda t)).
inline IntegrationResult i_infinity_trapezoid(double a, double b, double c,
                                              const QuadratureConfig& cfg) {
  const double lambda = c * std::numbers::ln10 / std::sqrt(a);
  const double log_b = b > 0.0 ? std::log(b) : 0.0;
  auto integrand = [&](double t) {
    if (b == 0.0) return std::exp(-t * t);
    const double e = log_b + lambda * t;
    if (e > 700.0) return 0.0;
    return std::exp(-t * t - std::exp(e));
  };
  // The log-integrand -t^2 - b e^(lambda t) is concave with curvature >= 2, so
  // a window centred on its maximum keeps the Gaussian truncation bound even
  // when large b pushes the mass far from t = 0.
  double centre = 0.0;
  if (b > 0.0 && lambda != 0.0) {
    const double log_bl = log_b + std::log(std::abs(lambda));
    const double sign = lambda > 0.0 ? 1.0 : -1.0;
    for (int it = 0; it < 200; ++it) {
      const double e = std::exp(std::min(log_bl + lambda * centre, 700.0));
      const double step = (2.0 * centre + sign * e) / (2.0 + std::abs(lambda) * e);
      centre -= step;
      if (std::abs(step) < 1e-12 * (1.0 + std::abs(centre))) break;
    }
  }
  const double half_width = cfg.truncation_radius / std::numbers::sqrt2;
  auto r = trapezoid_doubling(integrand, centre - half_width, centre + half_width,
                              cfg.target_rel_error, cfg.max_refinements);
  const double scale = 1.0 / std::sqrt(a);
  return {r.value * scale, r.est_error * scale, r.evaluations};
}

inline double series_term(const PiTriangle& pi, int k, double b, double s2_pow_over_fact) {
  // sum_j pi(2k, j) (-b)^(j+1) by Horner in x = -b.
  const auto row = pi.row(2 * k);
  const long double x = -static_cast<long double>(b);
  long double acc = 0.0L;
  for (std::size_t j = row.size(); j-- > 0;) acc = acc * x + static_cast<long double>(row[j]);
  return static_cast<double>(acc * x * s2_pow_over_fact);
}

// Bracketed sum {1 + sum_k ...}; value and est_error are in bracket units.
inline SeriesOutcome series_bracket(double s2, double b, const PiTriangle& pi,
                                    const SeriesConfig& cfg) {
  double sum = 1.0;
  double weight = 1.0;  // s2^k / k!
  double previous = 0.0;
  double best_sum = sum;
  double best_term = INFINITY;
  int small_run = 0;
  int growth_run = 0;
  int k = 1;
  bool converged = false;
  for (; k <= cfg.max_terms; ++k) {
    weight *= s2 / k;
    const double term = series_term(pi, k, b, weight);
    sum += term;
    const double mag = std::abs(term);
    if (mag < best_term) {
      best_term = mag;
      best_sum = sum;
    }
    growth_run = (k > 1 && mag > previous) ? growth_run + 1 : 0;
    if (k > 5 && growth_run >= 3) {
      throw series_divergence("series terms grew for 3 consecutive orders at k=" +
                                  std::to_string(k) + " (b=" + std::to_string(b) +
                                  ", s^2=" + std::to_string(s2) + ")",
                              best_sum);
    }
    small_run = mag <= cfg.term_rel_tolerance * std::abs(sum) ? small_run + 1 : 0;
    previous = mag;
    if (small_run >= 2) {
      converged = true;
      break;
    }
  }
  const int used = converged ? k : cfg.max_terms;
  // The series is asymptotic and its terms change sign as they pass through
  // zeros in b, so no single omitted term tracks the error. Use the envelope:
  // the last kept term plus up to four omitted ones, and a geometric
  // continuation when the omitted terms are still shrinking.
  double tail = previous;
  double last = 0.0;
  double ratio = 1.0;
  double w = weight;
  int taken = 0;
  for (int m = used + 1; m <= used + 4 && 2 * m <= pi.max_order(); ++m) {
    w *= s2 / m;
    const double mag = std::abs(series_term(pi, m, b, w));
    if (taken >= 1) ratio = last > 0.0 ? mag / last : 1.0;
    tail += mag;
    last = mag;
    ++taken;
  }
  if (taken >= 2 && ratio < 1.0) tail += last * ratio / (1.0 - ratio);
  return {sum, tail, used};
}

inline const PiTriangle& default_pi_triangle() {
  static const PiTriangle table(kMaxPiOrder);
  return table;
}

}  // namespace detail

/// int exp(-a x^2 - b 10^(c x)) dx over the real line, by quadrature.
inline double i_infinity_quadrature(double a, double b, double c, const QuadratureConfig& cfg = {}) {
  detail::require(a > 0.0, "i_infinity: a must be > 0");
  detail::require(b >= 0.0, "i_infinity: b must be >= 0");
  cfg.validate();
  return detail::i_infinity_trapezoid(a, b, c, cfg).value;
}

/// Same integral through the Gaussian-moment series.
inline double i_infinity_series(double a, double b, double c, const PiTriangle& pi,
                                const SeriesConfig& cfg = {}) {
  detail::require(a > 0.0, "i_infinity: a must be > 0");
  detail::require(b >= 0.0, "i_infinity: b must be >= 0");
  cfg.validate();
  detail::require(pi.max_order() >= 2 * cfg.max_terms,
                  "i_infinity_series: pi triangle too small for max_terms");
  const double scale = std::exp(-b) * std::sqrt(std::numbers::pi / a);
  if (b > cfg.b_max) {
    throw series_refused("series refused: b=" + std::to_string(b) + " exceeds b_max=" +
                             std::to_string(cfg.b_max) + "; use quadrature",
                         std::numeric_limits<double>::quiet_NaN());
  }
  const double s = c * std::numbers::ln10 / (2.0 * std::sqrt(a));
  try {
    return scale * detail::series_bracket(s * s, b, pi, cfg).value;
  } catch (const series_divergence& e) {
    throw series_divergence(e.what(), scale * e.best_estimate());
  }
}

// --- path-loss density -----------------------------------------------------

/// Maps a loss value onto the (a, b, c) of the shared integral; needs sigma_psi > 0.
inline IntegralForm integral_form(double l, const ChannelModel& channel,
                                  const SpatialModel& spatial) {
  detail::require(channel.sigma_psi > 0.0, "integral_form: sigma_psi must be > 0");
  const double beta = channel.beta;
  const double sp2 = channel.sigma_psi * channel.sigma_psi;
  IntegralForm form;
  form.a = 1.0 / (2.0 * sp2);
  form.c = 2.0 / beta;
  form.b = channel.r0 * channel.r0 / (2.0 * spatial.sigma() * spatial.sigma()) *
           std::pow(10.0, 2.0 * (beta * (l - channel.alpha_eff) + 2.0 * std::numbers::ln10 * sp2) /
                              (beta * beta));
  return form;
}

/// The b of integral_form; for sigma_psi = 0 it reduces to R^2 / (2 sigma^2) at loss l.
inline double induced_b(double l, const ChannelModel& channel, const SpatialModel& spatial) {
  const double beta = channel.beta;
  const double sp2 = channel.sigma_psi * channel.sigma_psi;
  return channel.r0 * channel.r0 / (2.0 * spatial.sigma() * spatial.sigma()) *
         std::pow(10.0, 2.0 * (beta * (l - channel.alpha_eff) + 2.0 * std::numbers::ln10 * sp2) /
                            (beta * beta));
}

namespace detail {

// log of r0^2 ln10 / (beta sigma^2) 10^(2 (l - alpha) / beta) exp(s2), s2 = (sqrt2 sigma_psi ln10 / beta)^2.
inline double log_series_prefactor(double l, const ChannelModel& channel,
                                   const SpatialModel& spatial) {
  const double s = std::numbers::sqrt2 * channel.sigma_psi * std::numbers::ln10 / channel.beta;
  return 2.0 * std::log(channel.r0) + std::log(std::numbers::ln10) - std::log(channel.beta) -
         2.0 * std::log(spatial.sigma()) +
         2.0 * (l - channel.alpha_eff) / channel.beta * std::numbers::ln10 + s * s;
}

}  // namespace detail

inline DensityResult pl_pdf_quadrature(double l, const ChannelModel& channel,
                                       const SpatialModel& spatial,
                                       const QuadratureConfig& cfg = {}) {
  cfg.validate();
  if (channel.sigma_psi == 0.0) {
    return {w_pdf(l, channel, spatial), Method::quadrature, 0.0, 0};
  }
  const auto form = integral_form(l, channel, spatial);
  const auto integral = detail::i_infinity_trapezoid(form.a, form.b, form.c, cfg);
  // Prefactor of the integral carries the extra 1 / (sqrt(2 pi) sigma_psi).
  const double log_pref = detail::log_series_prefactor(l, channel, spatial) -
                          0.5 * std::log(2.0 * std::numbers::pi) - std::log(channel.sigma_psi);
  DensityResult result;
  result.method = Method::quadrature;
  result.terms_or_nodes_used = integral.evaluations;
  if (integral.value > 0.0) {
    result.value = std::exp(log_pref + std::log(integral.value));
    result.est_error = result.value * (integral.est_error / integral.value);
  }
  return result;
}

inline DensityResult pl_pdf_series(double l, const ChannelModel& channel,
                                   const SpatialModel& spatial, const PiTriangle& pi,
                                   const SeriesConfig& cfg = {}) {
  cfg.validate();
  if (channel.sigma_psi == 0.0) {
    return {w_pdf(l, channel, spatial), Method::series, 0.0, 0};
  }
  detail::require(pi.max_order() >= 2 * cfg.max_terms,
                  "pl_pdf_series: pi triangle too small for max_terms");
  const double b = induced_b(l, channel, spatial);
  if (!(b <= cfg.b_max)) {
    throw series_refused("series refused: b=" + std::to_string(b) + " exceeds b_max=" +
                             std::to_string(cfg.b_max) + "; use quadrature",
                         std::numeric_limits<double>::quiet_NaN());
  }
  const double s = std::numbers::sqrt2 * std::numbers::ln10 * channel.sigma_psi / channel.beta;
  const double scale = std::exp(detail::log_series_prefactor(l, channel, spatial) - b);
  detail::SeriesOutcome bracket;
  try {
    bracket = detail::series_bracket(s * s, b, pi, cfg);
  } catch (const series_divergence& e) {
    throw series_divergence(e.what(), scale * e.best_estimate());
  }
  DensityResult result{scale * bracket.value, Method::series, scale * bracket.est_error,
                       bracket.terms};
  if (result.value < 0.0) {
    result.est_error = std::max(result.est_error, -result.value);
    result.value = 0.0;
    result.clamped = true;
  }
  return result;
}

/// Dispatch: automatic takes the series where b <= b_max and its error
/// estimate meets the quadrature target, quadrature everywhere else.
inline DensityResult pl_pdf(double l, const ChannelModel& channel, const SpatialModel& spatial,
                            MethodChoice method = MethodChoice::automatic,
                            const QuadratureConfig& qcfg = {}, const SeriesConfig& scfg = {}) {
  switch (method) {
    case MethodChoice::quadrature:
      return pl_pdf_quadrature(l, channel, spatial, qcfg);
    case MethodChoice::series:
      return pl_pdf_series(l, channel, spatial, detail::default_pi_triangle(), scfg);
    case MethodChoice::automatic:
      break;
  }
  if (channel.sigma_psi > 0.0 && induced_b(l, channel, spatial) <= scfg.b_max) {
    try {
      auto r = pl_pdf_series(l, channel, spatial, detail::default_pi_triangle(), scfg);
      if (!r.clamped && r.est_error <= qcfg.target_rel_error * r.value) return r;
    } catch (const series_divergence&) {
    }
  }
  return pl_pdf_quadrature(l, channel, spatial, qcfg);
}

/// Standard normal CDF.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// P(L <= l), integrating Phi((l - W(r)) / sigma_psi) against the Rayleigh law of r.
inline DensityResult pl_cdf(double l, const ChannelModel& channel, const SpatialModel& spatial,
                            const QuadratureConfig& cfg = {}) {
  cfg.validate();
  if (channel.sigma_psi == 0.0) {
    return {w_cdf(l, channel, spatial), Method::quadrature, 0.0, 0};
  }
  // With y = r^2 / (2 sigma^2) = e^z the Rayleigh measure becomes exp(z - e^z) dz
  // and W = alpha + beta log10(sqrt2 sigma / r0) + beta z / (2 ln10).
  const double w_at_zero = channel.alpha_eff +
                           channel.beta * std::log10(std::numbers::sqrt2 * spatial.sigma() / channel.r0);
  const double slope = channel.beta / (2.0 * std::numbers::ln10);
  auto integrand = [&](double z) {
    const double weight = std::exp(z - std::exp(z));
    if (weight == 0.0) return 0.0;
    return weight * normal_cdf((l - w_at_zero - slope * z) / channel.sigma_psi);
  };
  // exp(z - e^z) < 1e-18 outside [-42, 4].
  auto r = trapezoid_doubling(integrand, -42.0, 4.0, cfg.target_rel_error, cfg.max_refinements);
  return {std::clamp(r.value, 0.0, 1.0), Method::quadrature, r.est_error, r.evaluations};
}

inline Moments pl_moments(const ChannelModel& channel, const SpatialModel& spatial) {
  // ln R^2 / (2 sigma^2) is Gumbel-min distributed: mean -gamma, variance pi^2 / 6.
  const double scale = channel.beta / std::numbers::ln10;
  Moments m;
  m.mean = channel.alpha_eff +
           scale * (std::log(std::numbers::sqrt2 * spatial.sigma() / channel.r0) -
                    0.5 * std::numbers::egamma);
  m.variance = scale * scale * std::numbers::pi * std::numbers::pi / 24.0 +
               channel.sigma_psi * channel.sigma_psi;
  return m;
}

/// P(R < r0): mass the unbounded-distance model assigns inside the close-in distance.
inline double mass_inside_close_in(const ChannelModel& channel, const SpatialModel& spatial) {
  return radial_cdf(channel.r0, spatial);
}

struct LossGrid {
  double from_db = 0.0;
  double to_db = 0.0;
  double step_db = 0.25;

  std::size_t size() const {
    return static_cast<std::size_t>(std::floor((to_db - from_db) / step_db + 1e-9)) + 1;
  }
  double at(std::size_t i) const { return from_db + static_cast<double>(i) * step_db; }
};

/// mean +- 6 SD from the analytic moments.
inline LossGrid default_grid(const ChannelModel& channel, const SpatialModel& spatial,
                             double step_db = 0.25) {
  const auto m = pl_moments(channel, spatial);
  const double sd = std::sqrt(m.variance);
  return {m.mean - 6.0 * sd, m.mean + 6.0 * sd, step_db};
}

}  // namespace pathloss
