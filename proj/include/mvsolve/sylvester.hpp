#pragma once

#include <Eigen/LU>

#include "mvsolve/problem.hpp"
#include "mvsolve/types.hpp"

namespace mvsolve {

enum class SylvesterBackend { KroneckerDense };

// The congruence-Sylvester equation A1 Y + Y^T A2 = A3 (note the transpose on
// Y, which distinguishes it from the classical Sylvester equation).
struct CongruenceSylvesterSystem {
  Matrix a1, a2, a3;
  SylvesterBackend backend = SylvesterBackend::KroneckerDense;
};

// Factored solver for A1 Y + Y^T A2 = A3 with fixed (A1, A2): the n^2 x n^2
// operator (I (x) A1) + (A2^T (x) I) P is assembled and LU-factored once, so
// repeated solves against fresh right-hand sides cost one substitution each.
// Throws SingularSystem when the operator's condition estimate exceeds 1e12.
class CongruenceSylvesterSolver {
 public:
  CongruenceSylvesterSolver(const Matrix& a1, const Matrix& a2);

  Matrix solve(const Matrix& a3) const;
  double condition_estimate() const noexcept { return cond_; }
  Index order() const noexcept { return n_; }

 private:
  Index n_;
  Eigen::PartialPivLU<Matrix> lu_;
  double cond_ = 0.0;
};

// One-shot convenience wrapper over CongruenceSylvesterSolver.
Matrix solve_congruence(const CongruenceSylvesterSystem& sys);

// Inner subproblem of the Bregman splitting iteration: the stationarity
// equation X(4J^2 + rI) - 4JX^TJ = 4MJ - rC, reduced by a right multiplication
// with J^{-1} and the substitution Y := X^T to
//   A1 Y + Y^T A2 = A3,  A1 = -4J,  A2 = 4J + rJ^{-1},  A3 = 4M - rCJ^{-1}.
// The solved Y transposes back to the minimizer X.
CongruenceSylvesterSystem build_soc_system(const ProblemInstance& inst,
                                           const Matrix& c, double r);

// Dense n^2 x n^2 operator (4J^2 + rI) (x) I - 4 (J (x) J) P acting on
// vec(X); used as the correctness oracle and for condition estimation.
// Capped at n <= 40 (throws SizeLimit beyond).
Matrix vectorized_soc_operator(const ProblemInstance& inst, double r);

}  // namespace mvsolve
