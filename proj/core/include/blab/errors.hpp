#pragma once

#include <stdexcept>
#include <string>

namespace blab {

// Thrown when a rejection sampler exceeds its draw budget. The acceptance
// region of the off-cube sphere slice shrinks as eps grows, so a bad
// parameter choice can make rejection arbitrarily slow; we fail loudly
// instead of spinning.
class sampler_exhausted : public std::runtime_error {
 public:
  explicit sampler_exhausted(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when distribution parameters describe an empty or contradictory
// support (for example a scaled sphere slice with no room left inside the
// unit box).
class infeasible_spec : public std::invalid_argument {
 public:
  explicit infeasible_spec(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace blab
