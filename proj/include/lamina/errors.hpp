#pragma once

#include <stdexcept>
#include <string>

namespace lamina {

// Bad user-supplied configuration (flags, JSON config, parameter ranges).
// The CLI maps this to exit code 2.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Quadrature non-convergence, simulation aborts and similar runtime failures.
// The CLI maps this to exit code 3.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lamina
