#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Core>

namespace proxflow {

struct InvalidParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvalidProblemError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DimensionMismatchError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct UnsupportedDimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvalidSlopeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InsufficientDataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotConvergedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown when an oracle produces non-finite output. The integrator catches
/// this and returns the partial trajectory with a divergence stop reason.
struct DivergenceError : std::runtime_error {
  double t;
  Eigen::VectorXd x, y;

  DivergenceError(const std::string& msg, Eigen::VectorXd x_state, Eigen::VectorXd y_state,
                  double time = -1.0)
      : std::runtime_error(msg), t(time), x(std::move(x_state)), y(std::move(y_state)) {}
};

}  // namespace proxflow
