#include "mvsolve/dynamics.hpp"

namespace mvsolve {

TrajectoryState dynamics_step(const SpdMatrix& j, const SkewMatrix& m_k, int k,
                              Algorithm algo, const SolverConfig& cfg,
                              const Matrix* x0_hint,
                              std::optional<double> c_norm_hint) {
  ProblemInstance inst(j, m_k, {}, {}, c_norm_hint);
  SolverConfig step_cfg = cfg;
  if (x0_hint != nullptr) step_cfg.x0 = StartPoint::given_matrix(*x0_hint);
  SolverReport report = solve(inst, algo, step_cfg);

  TrajectoryState state(k, m_k);
  state.report = report;
  if (!report.converged) return state;  // omega left empty, caller decides

  const Matrix omega = report.solution.matrix().transpose();
  state.omega = RotationMatrix::from_iterate(omega);
  return state;
}

PropagationResult propagate(const SpdMatrix& j, const SkewMatrix& m0,
                            int steps, Algorithm algo, const SolverConfig& cfg,
                            bool warm_start) {
  if (steps < 1) throw ValidationError("propagate: steps must be >= 1");
  PropagationResult result;
  const double c_norm =
      ProblemInstance(j, SkewMatrix::zero(j.order()), {}, {}).c_norm();

  SkewMatrix m = m0;
  Matrix prev_solution;
  for (int k = 0; k < steps; ++k) {
    const Matrix* hint =
        (warm_start && k > 0 && prev_solution.size() > 0) ? &prev_solution
                                                          : nullptr;
    TrajectoryState state = dynamics_step(j, m, k, algo, cfg, hint, c_norm);
    const bool ok = state.omega.has_value();
    if (ok) prev_solution = state.report->solution.matrix();
    result.states.push_back(std::move(state));
    if (!ok) {
      result.error = "solver failed to converge at step " + std::to_string(k);
      return result;
    }
    const Matrix& w = result.states.back().omega->matrix();
    // orthogonal congruence; re-skew so the invariant holds exactly
    m = SkewMatrix(w * m.matrix() * w.transpose());
  }
  result.states.emplace_back(steps, m);
  result.completed = true;
  return result;
}

}  // namespace mvsolve
