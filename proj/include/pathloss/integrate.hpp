#pragma once

// Numerical integration helpers.
//
// trapezoid_doubling: composite trapezoid rule on a fixed interval, halving
// the step until two successive estimates agree. For analytic integrands that
// decay to negligible values at both ends this converges geometrically.
//
// integrate_adaptive: globally adaptive Gauss-Kronrod 7/15 for general
// finite-interval integrals (outer integrals over l, moments, checks).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <string>
#include <vector>

#include "pathloss/error.hpp"

namespace pathloss {

struct IntegrationResult {
  double value = 0.0;
  double est_error = 0.0;
  int evaluations = 0;
};

template <class F>
IntegrationResult trapezoid_doubling(const F& f, double lo, double hi, double rel_tol,
                                     int max_refinements, int initial_intervals = 64) {
  detail::require(hi > lo, "trapezoid_doubling: empty interval");
  int n = initial_intervals;
  double h = (hi - lo) / n;
  double sum = 0.5 * (f(lo) + f(hi));
  for (int i = 1; i < n; ++i) sum += f(lo + i * h);
  double estimate = sum * h;
  int evaluations = n + 1;
  for (int refinement = 0; refinement < max_refinements; ++refinement) {
    double midpoints = 0.0;
    for (int i = 0; i < n; ++i) midpoints += f(lo + (i + 0.5) * h);
    sum += midpoints;
    evaluations += n;
    n *= 2;
    h *= 0.5;
    const double refined = sum * h;
    const double diff = std::abs(refined - estimate);
    estimate = refined;
    if (diff <= rel_tol * std::abs(refined) || (refined == 0.0 && diff == 0.0)) {
      return {refined, diff, evaluations};
    }
  }
  throw numerical_failure("trapezoid rule did not converge after " +
                              std::to_string(max_refinements) + " refinements",
                          estimate);
}

namespace detail {

struct GkPanel {
  double lo, hi, value, error;
  bool operator<(const GkPanel& other) const { return error < other.error; }
};

template <class F>
GkPanel gauss_kronrod_15(const F& f, double lo, double hi) {
  static constexpr std::array<double, 8> xk = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
  static constexpr std::array<double, 8> wk = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr std::array<double, 4> wg = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  double kronrod = wk[7] * fc;
  double gauss = wg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * xk[i];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += wk[i] * pair;
    if (i % 2 == 1) gauss += wg[i / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  return {lo, hi, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace detail

template <class F>
IntegrationResult integrate_adaptive(const F& f, double lo, double hi, double rel_tol = 1e-10,
                                     double abs_tol = 1e-14, int max_panels = 20000) {
  detail::require(hi > lo, "integrate_adaptive: empty interval");
  std::priority_queue<detail::GkPanel> panels;
  // Start from several panels so narrow peaks are not skipped.
  constexpr int kInitialPanels = 16;
  double total = 0.0;
  double error = 0.0;
  const double width = (hi - lo) / kInitialPanels;
  for (int i = 0; i < kInitialPanels; ++i) {
    auto p = detail::gauss_kronrod_15(f, lo + i * width, i + 1 == kInitialPanels ? hi : lo + (i + 1) * width);
    total += p.value;
    error += p.error;
    panels.push(p);
  }
  int evaluations = 15 * kInitialPanels;
  while (error > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (static_cast<int>(panels.size()) >= max_panels) {
      throw numerical_failure("adaptive quadrature exceeded panel budget", total);
    }
    const auto worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const auto left = detail::gauss_kronrod_15(f, worst.lo, mid);
    const auto right = detail::gauss_kronrod_15(f, mid, worst.hi);
    evaluations += 30;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
  }
  return {total, error, evaluations};
}

}  // namespace pathloss
