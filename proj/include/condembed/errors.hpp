#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace condembed {

// Thrown when a transition matrix has a zero diagonal entry: such a matrix
// admits no generator under the at-most-one-jump condition.
class not_j1_embeddable : public std::runtime_error {
public:
  explicit not_j1_embeddable(const std::string& what) : std::runtime_error(what) {}
};

// Fixed-point iteration exhausted its iteration budget.
class non_convergence : public std::runtime_error {
public:
  non_convergence(const std::string& what, double residual, std::size_t iterations)
      : std::runtime_error(what), residual_(residual), iterations_(iterations) {}

  double residual() const noexcept { return residual_; }
  std::size_t iterations() const noexcept { return iterations_; }

private:
  double residual_;
  std::size_t iterations_;
};

// Malformed input file (CSV syntax, ragged rows, bad literals).
class parse_error : public std::runtime_error {
public:
  explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace condembed
