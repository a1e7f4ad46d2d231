#pragma once

// Combinatorial building blocks of the series form of the path-loss density.
//
// pi(i, j) is the coefficient of (-b)^(j+1) (c ln10)^i in the i-th derivative
// of exp(-b * 10^(c x)) at x = 0, divided by exp(-b). It obeys
//   pi(i, j) = (j + 1) * pi(i - 1, j) + pi(i - 1, j - 1),   pi(1, 0) = 1,
// i.e. pi(i, j) = S(i, j + 1), a Stirling number of the second kind.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "pathloss/error.hpp"

namespace pathloss {

/// Largest order whose entries all fit in std::uint64_t.
inline constexpr int kMaxPiOrder = 26;

/// Largest n for which n!! fits in std::uint64_t.
inline constexpr int kMaxDoubleFactorial = 33;

namespace detail {

inline bool add_overflows(std::uint64_t a, std::uint64_t b, std::uint64_t& out) {
  out = a + b;
  return out < a;
}

inline bool mul_overflows(std::uint64_t a, std::uint64_t b, std::uint64_t& out) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return true;
  out = a * b;
  return false;
}

inline std::uint64_t exact_factorial(int n) {
  require(n >= 0 && n <= 20, "exact_factorial: n must be in [0, 20]");
  std::uint64_t f = 1;
  for (int k = 2; k <= n; ++k) f *= static_cast<std::uint64_t>(k);
  return f;
}

inline double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

// Exact below 21, log-gamma above.
inline double factorial(int n) {
  if (n <= 20) return static_cast<double>(exact_factorial(n));
  return std::exp(log_factorial(n));
}

}  // namespace detail

/// Triangular table pi(i, j), 1 <= i <= max_order, 0 <= j <= i - 1.
class PiTriangle {
 public:
  explicit PiTriangle(int max_order) : max_order_(max_order) {
    detail::require(max_order >= 1, "pi_triangle: max_order must be >= 1");
    if (max_order > kMaxPiOrder) {
      throw std::invalid_argument("pi_triangle: max_order " + std::to_string(max_order) +
                                  " exceeds " + std::to_string(kMaxPiOrder) +
                                  ", entries would overflow 64-bit integers");
    }
    entries_.resize(static_cast<std::size_t>(max_order) * (max_order + 1) / 2);
    at(1, 0) = 1;
    for (int i = 2; i <= max_order; ++i) {
      for (int j = 0; j < i; ++j) {
        std::uint64_t carried = 0;
        std::uint64_t scaled = 0;
        if (j <= i - 2 &&
            detail::mul_overflows(static_cast<std::uint64_t>(j + 1), at(i - 1, j), scaled)) {
          throw std::overflow_error("pi_triangle: overflow at i=" + std::to_string(i));
        }
        if (j >= 1) carried = at(i - 1, j - 1);
        if (detail::add_overflows(scaled, carried, at(i, j))) {
          throw std::overflow_error("pi_triangle: overflow at i=" + std::to_string(i));
        }
      }
    }
  }

  int max_order() const noexcept { return max_order_; }

  std::uint64_t operator()(int i, int j) const {
    detail::require(i >= 1 && i <= max_order_, "pi_triangle: row index out of range");
    detail::require(j >= 0 && j < i, "pi_triangle: column index out of range");
    return entries_[offset(i) + j];
  }

  /// Entries pi(i, 0) .. pi(i, i - 1).
  std::span<const std::uint64_t> row(int i) const {
    detail::require(i >= 1 && i <= max_order_, "pi_triangle: row index out of range");
    return {entries_.data() + offset(i), static_cast<std::size_t>(i)};
  }

 private:
  static std::size_t offset(int i) { return static_cast<std::size_t>(i - 1) * i / 2; }
  std::uint64_t& at(int i, int j) { return entries_[offset(i) + j]; }

  int max_order_;
  std::vector<std::uint64_t> entries_;
};

inline PiTriangle pi_triangle(int max_order) { return PiTriangle(max_order); }

/// n!! by the product definition; n!! = 1 for n = -1, 0.
inline std::uint64_t double_factorial(int n) {
  detail::require(n >= -1, "double_factorial: n must be >= -1");
  detail::require(n <= kMaxDoubleFactorial, "double_factorial: n too large for 64-bit result");
  std::uint64_t product = 1;
  for (int k = n; k > 1; k -= 2) product *= static_cast<std::uint64_t>(k);
  return product;
}

/// n!! through the factorial-ratio forms:
///   odd n:  (n+1)! / (2^((n+1)/2) ((n+1)/2)!)
///   even n: 2^(n/2) (n/2)!
/// Limited to n <= 19 (odd, exact (n+1)!) and n <= 32 (even).
inline std::uint64_t double_factorial_closed_form(int n) {
  detail::require(n >= -1, "double_factorial: n must be >= -1");
  if (n % 2 == 0) {
    detail::require(n <= 32, "double_factorial_closed_form: n too large");
    return (std::uint64_t{1} << (n / 2)) * detail::exact_factorial(n / 2);
  }
  detail::require(n <= 19, "double_factorial_closed_form: n too large");
  const int half = (n + 1) / 2;
  return detail::exact_factorial(n + 1) / ((std::uint64_t{1} << half) * detail::exact_factorial(half));
}

/// Integral of exp(-a x^2) x^i over [0, inf).
inline double gaussian_moment_half(int i, double a) {
  detail::require(i >= 0, "gaussian_moment_half: i must be >= 0");
  detail::require(a > 0.0, "gaussian_moment_half: a must be > 0");
  if (i % 2 == 1) {
    const int m = (i - 1) / 2;
    if (m <= 20) return detail::factorial(m) / (2.0 * std::pow(a, (i + 1) / 2.0));
    return std::exp(detail::log_factorial(m) - std::log(2.0) - 0.5 * (i + 1) * std::log(a));
  }
  if (i <= 20) {
    return detail::factorial(i) / (std::ldexp(1.0, i + 1) * detail::factorial(i / 2)) *
           std::sqrt(std::numbers::pi / std::pow(a, i + 1));
  }
  return std::exp(detail::log_factorial(i) - (i + 1) * std::numbers::ln2 -
                  detail::log_factorial(i / 2) + 0.5 * std::log(std::numbers::pi) -
                  0.5 * (i + 1) * std::log(a));
}

/// Integral of exp(-a x^2) x^i over the whole real line; zero for odd i.
inline double gaussian_moment_full(int i, double a) {
  detail::require(i >= 0, "gaussian_moment_full: i must be >= 0");
  detail::require(a > 0.0, "gaussian_moment_full: a must be > 0");
  if (i % 2 == 1) return 0.0;
  if (i <= 20) {
    return detail::factorial(i) / (std::ldexp(1.0, i) * detail::factorial(i / 2)) *
           std::sqrt(std::numbers::pi / std::pow(a, i + 1));
  }
  return std::exp(detail::log_factorial(i) - i * std::numbers::ln2 - detail::log_factorial(i / 2) +
                  0.5 * std::log(std::numbers::pi) - 0.5 * (i + 1) * std::log(a));
}

}  // namespace pathloss
