#pragma once

#include <stdexcept>
#include <string>

namespace pathloss {

/// Raised when a numerical routine cannot deliver its requested accuracy.
/// Carries the best estimate reached before giving up.
class numerical_failure : public std::runtime_error {
 public:
  numerical_failure(const std::string& what, double best_estimate)
      : std::runtime_error(what), best_estimate_(best_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }

 private:
  double best_estimate_;
};

/// The series route was asked for a point outside its trusted region.
class series_refused : public numerical_failure {
 public:
  using numerical_failure::numerical_failure;
};

/// Series terms started growing before the sum converged.
class series_divergence : public numerical_failure {
 public:
  using numerical_failure::numerical_failure;
};

/// Malformed configuration input (channel config file, CLI arguments).
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const char* message) {
  if (!condition) throw std::invalid_argument(message);
}

inline void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

}  // namespace detail
}  // namespace pathloss
