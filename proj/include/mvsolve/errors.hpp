#pragma once

#include <stdexcept>
#include <string>

namespace mvsolve {

// Shape or argument mismatch between matrices.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Input failed a domain-type invariant (not SPD, not close enough to O(n), ...).
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Rank-deficient input: the nearest-orthogonal projection is not unique.
struct DegenerateProjection : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An iterative kernel (power iteration, eigensolver) exhausted its budget.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Problem order exceeds the cap of a dense O(n^6)-memory construction.
struct SizeLimit : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Structurally ill-posed instance (e.g. trace(J) = 0 in the closed form).
struct DegenerateInstance : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The vectorized inner operator is singular or numerically close to it.
class SingularSystem : public std::runtime_error {
 public:
  SingularSystem(const std::string& what, double condition_estimate)
      : std::runtime_error(what), condition_estimate_(condition_estimate) {}

  double condition_estimate() const noexcept { return condition_estimate_; }

 private:
  double condition_estimate_;
};

// Malformed instance/report file.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mvsolve
