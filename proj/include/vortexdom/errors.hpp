#pragma once

#include <stdexcept>
#include <string>

namespace vortexdom {

/// Input or assumption violations detected before numerics run.
class precondition_error : public std::runtime_error {
 public:
  explicit precondition_error(const std::string& msg)
      : std::runtime_error(msg) {}
};

/// Root brackets lost, non-convergent iterations, inconsistent results.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// File system and serialization failures.
class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace vortexdom
