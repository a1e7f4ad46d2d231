// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pathloss/pathloss.hpp"

#ifndef PATHLOSS_CLI_PATH
#error "PATHLOSS_CLI_PATH must name the CLI binary"
#endif

namespace {

using namespace pathloss;

struct Verdict {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Verdict()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v{false, ""};
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!v.pass) ++failures;
  std::printf("criterion %d %-28s %s  (%s; %.1f s)\n", id, title.c_str(), v.pass ? "PASS" : "FAIL",
              v.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

// d^i/dx^i exp(-b e^(lambda x)) at 0, by repeated symbolic differentiation.
std::map<int, long long> derivative_coefficients(int order) {
  std::map<std::pair<int, int>, long long> poly{{{0, 0}, 1}};
  for (int i = 0; i < order; ++i) {
    std::map<std::pair<int, int>, long long> next;
    for (const auto& [pq, c] : poly) {
      if (pq.first != 0) next[pq] += c * pq.first;
      next[{pq.first + 1, pq.second + 1}] -= c;
    }
    poly = std::move(next);
  }
  std::map<int, long long> by_b;
  for (const auto& [pq, c] : poly) by_b[pq.second] += c;
  return by_b;
}

Verdict coefficients() {
  const std::uint64_t table[5][5] = {
      {1, 0, 0, 0, 0}, {1, 1, 0, 0, 0}, {1, 3, 1, 0, 0}, {1, 7, 6, 1, 0}, {1, 15, 25, 10, 1}};
  const auto pi = pi_triangle(12);
  int table_ok = 0;
  for (int i = 1; i <= 5; ++i) {
    for (int j = 0; j < i; ++j) table_ok += pi(i, j) == table[i - 1][j];
  }
  int mismatches = 0;
  for (int i = 1; i <= 12; ++i) {
    const auto c = derivative_coefficients(i);
    for (int j = 0; j < i; ++j) {
      const long long sign = (j + 1) % 2 == 0 ? 1 : -1;
      const auto it = c.find(j + 1);
      if (it == c.end() || static_cast<long long>(pi(i, j)) != sign * it->second) ++mismatches;
    }
  }
  return {table_ok == 15 && mismatches == 0,
          std::to_string(table_ok) + "/15 table entries, " + std::to_string(mismatches) +
              " oracle mismatches for i<=12"};
}

Verdict integral_machinery() {
  // 50 draws fixed by seed 42 on a dedicated counter stream.
  const CounterRng rng(42, static_cast<Stream>(0x6163636570742d32ULL));
  int agree = 0;
  int diverged = 0;
  double worst = 0.0;
  int gaussian_ok = 0;
  std::string misses;
  for (std::uint64_t i = 0; i < 50; ++i) {
    const double a = 0.1 + 4.9 * rng.uniform(3 * i);
    const double b = rng.uniform(3 * i + 1);
    const double c = -0.5 + rng.uniform(3 * i + 2);
    const double q = i_infinity_quadrature(a, b, c);
    try {
      const double s = i_infinity_series(a, b, c, detail::default_pi_triangle());
      const double rel = std::abs(s - q) / q;
      worst = std::max(worst, rel);
      agree += rel <= 1e-6;
      if (rel > 1e-6) {
        const double s2 = std::pow(c * std::numbers::ln10, 2) / (4.0 * a);
        misses += " (b=" + fmt("%.2f", b) + ",s^2=" + fmt("%.2f", s2) + ")";
      }
    } catch (const series_divergence&) {
      ++diverged;
    }
    const double ref = std::sqrt(std::numbers::pi / a);
    const double q0 = i_infinity_quadrature(a, 0.0, c);
    const double s0 = i_infinity_series(a, 0.0, c, detail::default_pi_triangle());
    gaussian_ok += std::abs(q0 - ref) <= 1e-9 * ref && std::abs(s0 - ref) <= 1e-9 * ref;
  }
  return {agree == 50 && gaussian_ok == 50,
          std::to_string(agree) + "/50 agree to 1e-6, " + std::to_string(diverged) +
              " series divergences, worst series rel " + fmt("%.2e", worst) + ", b=0 limit " +
              std::to_string(gaussian_ok) + "/50" +
              (misses.empty() ? "" : ", misses at" + misses)};
}

Verdict normalisation() {
  double worst = 0.0;
  for (const auto& name : kPresetNames) {
    const auto ch = preset(name);
    for (double sigma : {100.0, 500.0, 1000.0}) {
      const SpatialModel sp(sigma);
      const auto r = integrate_adaptive([&](double l) { return pl_pdf(l, ch, sp).value; },
                                        ch.alpha_eff - 150.0, ch.alpha_eff + 450.0, 1e-10, 1e-14);
      worst = std::max(worst, std::abs(r.value - 1.0));
    }
  }
  return {worst <= 1e-6, "max |integral - 1| = " + fmt("%.2e", worst) + " over 12 cases"};
}

Verdict closed_form_vs_monte_carlo() {
  const SpatialModel sp(500.0);
  const std::size_t n = 10000;
  const double threshold = ks_critical_1pct(n);
  bool ok = true;
  std::string detail;
  for (const auto& name : kPresetNames) {
    const auto ch = preset(name);
    const auto first = validate(ch, sp, n, 42, std::nullopt, threshold);
    int passes = 0;
    for (std::uint64_t seed = 42; seed < 62; ++seed) {
      passes += validate(ch, sp, n, seed, std::nullopt, threshold).passed;
    }
    ok = ok && first.passed && passes >= 19;
    detail += std::string(name) + " D=" + fmt("%.4f", first.ks_statistic) + " " + std::to_string(passes) +
              "/20; ";
  }
  detail.pop_back();
  detail.pop_back();
  return {ok, detail};
}

Verdict spatial_generation() {
  const std::size_t n = 10000;
  const double threshold = ks_critical_1pct(n);
  double worst = 0.0;
  for (double sigma : {100.0, 500.0, 1000.0}) {
    const SpatialModel m(sigma);
    const auto s = sample_positions(n, m, 42);
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> r;
    for (const auto& p : s) {
      x.push_back(p.x);
      y.push_back(p.y);
      r.push_back(p.r);
    }
    const auto axis = [&](double v) { return normal_cdf(v / sigma); };
    worst = std::max({worst, ks_statistic(x, axis), ks_statistic(y, axis),
                      ks_statistic(r, [&](double v) { return radial_cdf(v, m); })});
  }
  return {worst < threshold, "max D = " + fmt("%.4f", worst) + " vs " + fmt("%.4f", threshold) + " (9 tests)"};
}

Verdict degenerate_limit() {
  double worst = 0.0;
  int points = 0;
  bool exact = true;
  for (const auto& name : kPresetNames) {
    auto ch = preset(name);
    const SpatialModel sp(500.0);
    ch.sigma_psi = 1e-3;
    for (double l = ch.alpha_eff - 80.0; l < ch.alpha_eff + 200.0; l += 0.25) {
      const double w = w_pdf(l, ch, sp);
      if (w <= 1e-6) continue;
      worst = std::max(worst, std::abs(pl_pdf(l, ch, sp).value - w) / w);
      ++points;
    }
    ch.sigma_psi = 0.0;
    for (double l = ch.alpha_eff - 80.0; l < ch.alpha_eff + 200.0; l += 0.25) {
      exact = exact && pl_pdf(l, ch, sp).value == w_pdf(l, ch, sp);
    }
  }
  return {worst <= 1e-3 && exact && points > 0,
          "max rel " + fmt("%.2e", worst) + " over " + std::to_string(points) + " points, sigma_psi=0 " +
              (exact ? "exact" : "NOT exact")};
}

Verdict moment_consistency() {
  double worst_numeric = 0.0;
  double worst_z = 0.0;
  for (const auto& name : kPresetNames) {
    const auto ch = preset(name);
    const SpatialModel sp(500.0);
    const auto m = pl_moments(ch, sp);
    auto f = [&](double l) { return pl_pdf(l, ch, sp).value; };
    const double lo = ch.alpha_eff - 150.0;
    const double hi = ch.alpha_eff + 450.0;
    const double mean = integrate_adaptive([&](double l) { return l * f(l); }, lo, hi, 1e-10, 1e-12).value;
    const double var =
        integrate_adaptive([&](double l) { return (l - mean) * (l - mean) * f(l); }, lo, hi, 1e-10, 1e-12).value;
    worst_numeric = std::max({worst_numeric, std::abs(mean - m.mean) / m.mean,
                              std::abs(var - m.variance) / m.variance});

    const auto losses = simulate(ch, sp, 1000000, 42).losses();
    const double n = static_cast<double>(losses.size());
    double mc_mean = 0.0;
    for (double v : losses) mc_mean += v;
    mc_mean /= n;
    double m2 = 0.0;
    double m4 = 0.0;
    for (double v : losses) {
      const double d = (v - mc_mean) * (v - mc_mean);
      m2 += d;
      m4 += d * d;
    }
    m2 /= n;
    m4 /= n;
    worst_z = std::max({worst_z, std::abs(mc_mean - m.mean) / std::sqrt(m2 / n),
                        std::abs(m2 - m.variance) / std::sqrt((m4 - m2 * m2) / n)});
  }
  return {worst_numeric <= 1e-3 && worst_z <= 3.0,
          "numeric max rel " + fmt("%.2e", worst_numeric) + ", Monte Carlo max |z| " + fmt("%.2f", worst_z)};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Verdict determinism() {
  const std::string base = std::string(PATHLOSS_CLI_PATH) +
                           " validate --preset urban_macro --sigma 500 --n 10000 --seed 42";
  std::array<std::string, 2> csv;
  std::array<std::string, 2> rep;
  for (int i = 0; i < 2; ++i) {
    const std::string out = "acceptance_validate_" + std::to_string(i) + ".csv";
    const std::string txt = "acceptance_report_" + std::to_string(i) + ".txt";
    const int code = std::system((base + " -o " + out + " --report " + txt).c_str());
    if (code != 0) return {false, "CLI exited with status " + std::to_string(code)};
    csv[i] = slurp(out);
    rep[i] = slurp(txt);
    std::remove(out.c_str());
    std::remove(txt.c_str());
  }
  const bool same = !csv[0].empty() && csv[0] == csv[1] && rep[0] == rep[1];
  return {same, std::to_string(csv[0].size()) + " CSV bytes, outputs " + (same ? "identical" : "differ")};
}

}  // namespace

int main() {
  report(1, "coefficient fidelity", coefficients);
  report(2, "integral machinery", integral_machinery);
  report(3, "density normalisation", normalisation);
  report(4, "closed form vs Monte Carlo", closed_form_vs_monte_carlo);
  report(5, "spatial generation", spatial_generation);
  report(6, "degenerate limit", degenerate_limit);
  report(7, "moment consistency", moment_consistency);
  report(8, "determinism", determinism);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
