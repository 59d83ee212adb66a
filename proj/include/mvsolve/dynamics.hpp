#pragma once

#include <optional>
#include <vector>

#include "mvsolve/solvers.hpp"

namespace mvsolve {

// One point of the discrete rigid-body recursion
//   M_k = omega_k^T J - J omega_k,   M_{k+1} = omega_k M_k omega_k^T.
// The inner solve targets X J - J X^T = M_k, so omega_k = X^T.
struct TrajectoryState {
  int k = 0;
  SkewMatrix momentum;                    // M_k
  std::optional<RotationMatrix> omega;    // angular velocity solved from M_k
  std::optional<SolverReport> report;

  explicit TrajectoryState(int step, SkewMatrix m)
      : k(step), momentum(std::move(m)) {}
};

// Solves the Moser-Veselov equation for M_k and advances the momentum.
// x0_hint overrides cfg.x0 (used for warm starts along a trajectory);
// c_norm_hint avoids recomputing the residual normalization for a fixed J.
TrajectoryState dynamics_step(const SpdMatrix& j, const SkewMatrix& m_k, int k,
                              Algorithm algo, const SolverConfig& cfg,
                              const Matrix* x0_hint = nullptr,
                              std::optional<double> c_norm_hint = {});

struct PropagationResult {
  // states[i] holds M_i; omega/report are present for every solved step
  // (all i < steps when the run completes).
  std::vector<TrajectoryState> states;
  bool completed = false;
  std::string error;
};

// Iterates the recursion for the given number of steps. By default each step
// after the first warm-starts from the previous solution; a failing step
// aborts with the partial trajectory and the failure recorded.
PropagationResult propagate(const SpdMatrix& j, const SkewMatrix& m0,
                            int steps, Algorithm algo, const SolverConfig& cfg,
                            bool warm_start = true);

}  // namespace mvsolve
