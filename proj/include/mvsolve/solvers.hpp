#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mvsolve/problem.hpp"
#include "mvsolve/types.hpp"

namespace mvsolve {

enum class Algorithm { Bregman, CayleyBB, GeodesicArmijo };

enum class StopReason {
  StepTolerance,
  ObjectiveTolerance,
  MaxIterations,
  InnerSolverFailure,
};

// Which parity the alternating Barzilai-Borwein rule assigns to the
// ||S||^2 / |<S,N>| formula. Equation follows the displayed step-size rule
// (odd iterations); Listing reproduces the pseudocode variant, which swaps
// the two branches and amounts to a one-iteration phase shift.
enum class BBParity { Equation, Listing };

struct StartPoint {
  enum class Kind { Identity, Random, Given };
  Kind kind = Kind::Identity;
  std::uint64_t seed = 0;
  Matrix given;

  static StartPoint identity() { return {}; }
  static StartPoint random(std::uint64_t seed) {
    StartPoint p;
    p.kind = Kind::Random;
    p.seed = seed;
    return p;
  }
  static StartPoint given_matrix(Matrix x) {
    StartPoint p;
    p.kind = Kind::Given;
    p.given = std::move(x);
    return p;
  }
};

struct SolverConfig {
  double r = 1.0;                    // Bregman penalty
  double tau0 = 1e-3;                // initial Cayley/BB step
  double tol = 1e-10;                // on ||X_k - X_{k-1}||_F / sqrt(n)
  std::optional<double> obj_tol;     // optional cap on the objective value
  int max_iter = 1000;
  StartPoint x0;
  double armijo_mu0 = 1.0;
  bool enforce_det = false;          // project onto SO(n) instead of O(n)
  BBParity bb_parity = BBParity::Equation;
  bool inner_projection = true;      // Bregman: re-orthogonalize X_k per step
};

struct IterationRecord {
  double objective;  // restricted objective at X_k
  double grad_norm;  // Frobenius norm of the Riemannian gradient at X_k
  double step_norm;  // ||X_k - X_{k-1}||_F / sqrt(n)
  double rel_res;    // relative residual at X_k
};

struct SolverReport {
  RotationMatrix solution;
  int iterations = 0;
  bool converged = false;
  StopReason stop_reason = StopReason::MaxIterations;
  std::vector<IterationRecord> history;  // one record per iteration
  double wall_time = 0.0;                // seconds
  std::string message;
};

// Shared termination rule: StepTolerance once the last recorded step norm
// drops strictly below tol, ObjectiveTolerance once the objective drops below
// obj_tol (when set), MaxIterations once k exceeds max_iter.
std::optional<StopReason> check_termination(
    const std::vector<IterationRecord>& history, const SolverConfig& cfg,
    int k);

// Alternating Barzilai-Borwein step from the last iterate difference S and
// gradient difference N: ||S||_F^2 / |<S,N>| on odd k,
// |<S,N>| / ||N||_F^2 on even k, clamped to [1e-12, 1e12]. Falls back to
// fallback_tau when the inner product degenerates.
double bb_step(const Matrix& s_prev, const Matrix& n_prev, int k,
               double fallback_tau);

// Bregman splitting: each iteration minimizes the penalized convex objective
// exactly through the congruence-Sylvester system, then projects onto the
// orthogonal group and updates the Bregman multiplier.
SolverReport solve_bregman(const ProblemInstance& inst,
                           const SolverConfig& cfg);

// Feasible steepest descent through the Cayley transform
// X <- (I + tau/2 W)^{-1} (I - tau/2 W) X with the alternating BB step size.
SolverReport solve_cayley_bb(const ProblemInstance& inst,
                             const SolverConfig& cfg);

// Steepest descent along geodesics X <- expm(-mu Z) X with Armijo
// doubling/halving control of mu.
SolverReport solve_geodesic_armijo(const ProblemInstance& inst,
                                   const SolverConfig& cfg);

SolverReport solve(const ProblemInstance& inst, Algorithm algo,
                   const SolverConfig& cfg);

Matrix initial_iterate(const ProblemInstance& inst, const StartPoint& x0);

const char* to_string(Algorithm a);
const char* to_string(StopReason r);
std::optional<Algorithm> algorithm_from_string(const std::string& name);

}  // namespace mvsolve
