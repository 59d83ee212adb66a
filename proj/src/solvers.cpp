#include "mvsolve/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>

#include "mvsolve/linalg.hpp"
#include "mvsolve/sylvester.hpp"

namespace mvsolve {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

IterationRecord make_record(const ProblemInstance& inst, const Matrix& x,
                            double grad_norm, double step_norm) {
  IterationRecord rec;
  rec.objective = objective_restricted(inst, x);
  rec.grad_norm = grad_norm;
  rec.step_norm = step_norm;
  rec.rel_res = residual(inst, x).rel_res;
  return rec;
}

SolverReport finish(Matrix x, int iterations, StopReason reason,
                    std::vector<IterationRecord> history, Clock::time_point t0,
                    std::string message = {}) {
  SolverReport rep;
  rep.solution = RotationMatrix::from_iterate(std::move(x));
  rep.iterations = iterations;
  rep.stop_reason = reason;
  rep.converged = reason == StopReason::StepTolerance ||
                  reason == StopReason::ObjectiveTolerance;
  rep.history = std::move(history);
  rep.wall_time = seconds_since(t0);
  rep.message = std::move(message);
  return rep;
}

}  // namespace

Matrix initial_iterate(const ProblemInstance& inst, const StartPoint& x0) {
  const Index n = inst.order();
  switch (x0.kind) {
    case StartPoint::Kind::Identity:
      return Matrix::Identity(n, n);
    case StartPoint::Kind::Random:
      return random_rotation(n, x0.seed).matrix();
    case StartPoint::Kind::Given: {
      if (x0.given.rows() != n || x0.given.cols() != n)
        throw DimensionError("initial_iterate: given X0 has the wrong order");
      // loose gate: a supplied start must at least be near the manifold
      RotationMatrix check(x0.given, 1e-8 * std::sqrt(static_cast<double>(n)));
      return check.matrix();
    }
  }
  throw ValidationError("initial_iterate: unknown start point kind");
}

std::optional<StopReason> check_termination(
    const std::vector<IterationRecord>& history, const SolverConfig& cfg,
    int k) {
  if (!history.empty()) {
    if (history.back().step_norm < cfg.tol) return StopReason::StepTolerance;
    if (cfg.obj_tol && history.back().objective < *cfg.obj_tol)
      return StopReason::ObjectiveTolerance;
  }
  if (k > cfg.max_iter) return StopReason::MaxIterations;
  return std::nullopt;
}

double bb_step(const Matrix& s_prev, const Matrix& n_prev, int k,
               double fallback_tau) {
  const double sn = std::abs(trace_product(s_prev.transpose(), n_prev));
  double tau;
  if (k % 2 != 0) {
    if (sn < 1e-300) return fallback_tau;
    tau = s_prev.squaredNorm() / sn;
  } else {
    const double nn = n_prev.squaredNorm();
    if (nn < 1e-300) return fallback_tau;
    tau = sn / nn;
  }
  if (!std::isfinite(tau)) return fallback_tau;
  return std::clamp(tau, 1e-12, 1e12);
}

SolverReport solve_bregman(const ProblemInstance& inst,
                           const SolverConfig& cfg) {
  const auto t0 = Clock::now();
  const Index n = inst.order();
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  const Matrix& j = inst.J();

  Matrix x = initial_iterate(inst, cfg.x0);
  Matrix p = x;                      // P_0 = X_0
  Matrix b = Matrix::Zero(n, n);     // B_0 = 0
  const Matrix jinv = Eigen::LLT<Matrix>(j).solve(Matrix::Identity(n, n));

  std::vector<IterationRecord> history;
  std::unique_ptr<CongruenceSylvesterSolver> inner;
  try {
    // A1 and A2 stay fixed over the whole iteration, so one factorization
    // serves every inner solve.
    inner = std::make_unique<CongruenceSylvesterSolver>(
        (-4.0 * j).eval(), (4.0 * j + cfg.r * jinv).eval());
  } catch (const SingularSystem& e) {
    return finish(std::move(x), 0, StopReason::InnerSolverFailure,
                  std::move(history), t0, e.what());
  }

  for (int k = 1;; ++k) {
    const Matrix a3 = 4.0 * inst.M() - cfg.r * (b - p) * jinv;
    Matrix xk;
    try {
      xk = inner->solve(a3).transpose();
    } catch (const std::exception& e) {
      return finish(std::move(x), k - 1, StopReason::InnerSolverFailure,
                    std::move(history), t0, e.what());
    }
    const Matrix yk = xk + b;
    try {
      p = project_to_orthogonal(yk, cfg.enforce_det);
      if (cfg.inner_projection)
        xk = project_to_orthogonal(xk, cfg.enforce_det);
    } catch (const DegenerateProjection& e) {
      return finish(std::move(x), k - 1, StopReason::InnerSolverFailure,
                    std::move(history), t0, e.what());
    }
    b += xk - p;

    const double step = (xk - x).norm() / sqrt_n;
    x = std::move(xk);
    const double gnorm =
        riemannian_gradient(inst, x, GradientKind::Restricted).matrix().norm();
    history.push_back(make_record(inst, x, gnorm, step));
    if (auto stop = check_termination(history, cfg, k + 1))
      return finish(std::move(x), k, *stop, std::move(history), t0);
  }
}

SolverReport solve_cayley_bb(const ProblemInstance& inst,
                             const SolverConfig& cfg) {
  const auto t0 = Clock::now();
  const Index n = inst.order();
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  const Matrix id = Matrix::Identity(n, n);

  Matrix x = initial_iterate(inst, cfg.x0);
  Matrix w = riemannian_gradient(inst, x, GradientKind::Restricted).matrix();
  double tau = cfg.tau0;

  std::vector<IterationRecord> history;
  for (int k = 1;; ++k) {
    // I + (tau/2) W is nonsingular for skew W; halve tau on the rounding
    // pathologies that still produce a useless solve
    Matrix x_new;
    bool ok = false;
    for (int attempt = 0; attempt <= 30; ++attempt) {
      x_new = (id + 0.5 * tau * w)
                  .partialPivLu()
                  .solve((id - 0.5 * tau * w) * x);
      if (x_new.allFinite()) {
        ok = true;
        break;
      }
      tau *= 0.5;
    }
    if (!ok)
      return finish(std::move(x), k - 1, StopReason::InnerSolverFailure,
                    std::move(history), t0, "Cayley step breakdown");

    const Matrix w_new =
        riemannian_gradient(inst, x_new, GradientKind::Restricted).matrix();
    const Matrix s = x_new - x;
    const Matrix nk = w_new - w;
    const int parity = (cfg.bb_parity == BBParity::Equation) ? k : k + 1;
    tau = bb_step(s, nk, parity, tau);

    x = std::move(x_new);
    w = w_new;
    history.push_back(make_record(inst, x, w.norm(), s.norm() / sqrt_n));
    if (auto stop = check_termination(history, cfg, k + 1))
      return finish(std::move(x), k, *stop, std::move(history), t0);
  }
}

SolverReport solve_geodesic_armijo(const ProblemInstance& inst,
                                   const SolverConfig& cfg) {
  const auto t0 = Clock::now();
  const double sqrt_n = std::sqrt(static_cast<double>(inst.order()));

  Matrix x = initial_iterate(inst, cfg.x0);
  Matrix g = gradient_restricted(inst, x);
  Matrix z = SkewMatrix(g * x.transpose() - x * g.transpose()).matrix();
  double mu = cfg.armijo_mu0;

  std::vector<IterationRecord> history;
  for (int k = 1;; ++k) {
    // A tangent direction at rounding level of the Euclidean gradient cannot
    // certify descent; treat the iterate as stationary.
    if (z.norm() <= 1e-12 * (1.0 + g.norm())) {
      history.push_back(make_record(inst, x, z.norm(), 0.0));
      return finish(std::move(x), k, StopReason::StepTolerance,
                    std::move(history), t0);
    }
    const double zsq = 0.5 * z.squaredNorm();  // 0.5 trace(Z Z^T)
    const double fx = objective_restricted(inst, x);
    Matrix pk = expm_skew_scaled_pade(-mu * z);
    Matrix qk = pk * pk;
    // doubling phase: accept ever longer geodesic arcs while the stronger
    // decrease condition holds
    for (int guard = 0;
         fx - objective_restricted(inst, qk * x) >= mu * zsq && guard < 100;
         ++guard) {
      pk = qk;
      qk = pk * pk;
      mu *= 2.0;
    }
    // halving phase: shrink until the Armijo condition holds for P
    while (fx - objective_restricted(inst, pk * x) < 0.5 * mu * zsq) {
      pk = expm_skew_scaled_pade(-mu * z);
      mu *= 0.5;
      if (mu < 1e-18)
        return finish(std::move(x), k - 1, StopReason::InnerSolverFailure,
                      std::move(history), t0, "Armijo line search stalled");
    }
    const Matrix x_new = pk * x;
    const double step = (x_new - x).norm() / sqrt_n;
    x = x_new;
    g = gradient_restricted(inst, x);
    z = SkewMatrix(g * x.transpose() - x * g.transpose()).matrix();
    history.push_back(make_record(inst, x, z.norm(), step));
    if (auto stop = check_termination(history, cfg, k + 1))
      return finish(std::move(x), k, *stop, std::move(history), t0);
  }
}

SolverReport solve(const ProblemInstance& inst, Algorithm algo,
                   const SolverConfig& cfg) {
  switch (algo) {
    case Algorithm::Bregman:
      return solve_bregman(inst, cfg);
    case Algorithm::CayleyBB:
      return solve_cayley_bb(inst, cfg);
    case Algorithm::GeodesicArmijo:
      return solve_geodesic_armijo(inst, cfg);
  }
  throw ValidationError("solve: unknown algorithm");
}

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Bregman:
      return "bregman";
    case Algorithm::CayleyBB:
      return "cayley_bb";
    case Algorithm::GeodesicArmijo:
      return "geodesic_armijo";
  }
  return "unknown";
}

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::StepTolerance:
      return "step_tolerance";
    case StopReason::ObjectiveTolerance:
      return "objective_tolerance";
    case StopReason::MaxIterations:
      return "max_iterations";
    case StopReason::InnerSolverFailure:
      return "inner_solver_failure";
  }
  return "unknown";
}

std::optional<Algorithm> algorithm_from_string(const std::string& name) {
  if (name == "bregman") return Algorithm::Bregman;
  if (name == "cayley_bb" || name == "cayley-bb") return Algorithm::CayleyBB;
  if (name == "geodesic_armijo" || name == "geodesic-armijo")
    return Algorithm::GeodesicArmijo;
  return std::nullopt;
}

}  // namespace mvsolve
