#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nspost {

/// Invalid input: bad sizes, unsupported options, malformed configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A query outside the closed unit square.
class DomainError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Linear solver breakdown (singular or numerically singular system).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Newton iteration did not reach the requested tolerance.
class StepFailure : public std::runtime_error {
 public:
  StepFailure(const std::string& what, double time, std::vector<double> residuals)
      : std::runtime_error(what), time_(time), residuals_(std::move(residuals)) {}

  double time() const noexcept { return time_; }
  const std::vector<double>& residual_history() const noexcept { return residuals_; }

 private:
  double time_;
  std::vector<double> residuals_;
};

}  // namespace nspost
