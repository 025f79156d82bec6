#pragma once

#include <stdexcept>
#include <string>

namespace finsler {

struct InvalidGaugeError : std::runtime_error {
  explicit InvalidGaugeError(const std::string& msg) : std::runtime_error(msg) {}
};

// Legendre map requested for a gauge whose dual is not differentiable
struct NotStrictlyConvexError : std::runtime_error {
  explicit NotStrictlyConvexError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NonConvergenceError : std::runtime_error {
  explicit NonConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidDensityError : std::runtime_error {
  explicit InvalidDensityError(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidConeError : std::runtime_error {
  explicit InvalidConeError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace finsler
