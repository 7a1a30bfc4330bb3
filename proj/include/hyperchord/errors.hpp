#pragma once

#include <stdexcept>
#include <string>

namespace hyperchord {

/// Thrown when an argument lies outside the domain of an operation.
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Thrown when an iterative method fails to reach its tolerance.
/// Carries the best estimate available at the point of failure.
class convergence_error : public std::runtime_error {
 public:
  convergence_error(const std::string& what, double best_estimate)
      : std::runtime_error(what), best_estimate_(best_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }

 private:
  double best_estimate_;
};

namespace detail {

inline void require(bool condition, const char* message) {
  if (!condition) throw domain_error(message);
}

}  // namespace detail
}  // namespace hyperchord
