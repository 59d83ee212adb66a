#include "mvsolve/problem.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace mvsolve {

namespace {

// ||C||_2 for C = J (x) I - (I (x) J) P, i.e. the operator
// D -> D J - J D^T on vec'd matrices. Assembled densely up to order 40,
// matrix-free power iteration beyond that.
double residual_operator_norm(const Matrix& j) {
  const Index n = j.rows();
  if (n <= 40) {
    const Matrix id = Matrix::Identity(n, n);
    const Matrix pi = commutation_matrix(n);
    const Matrix c = kronecker(j, id) - kronecker(id, j) * pi;
    return spectral_norm(c);
  }
  GaussianStream start(0x9e3779b97f4a7c15ull);
  Matrix v = start.matrix(n, n);
  v /= v.norm();
  double sigma = 0.0;
  int settled = 0;
  for (int it = 0; it < 20000; ++it) {
    const Matrix u = v * j - j * v.transpose();           // C vec(v)
    const Matrix w = u * j - u.transpose() * j;           // C^T vec(u)
    const double wn = w.norm();
    if (wn == 0.0) return 0.0;
    v = w / wn;
    const double next = std::sqrt(wn);
    if (std::abs(next - sigma) <= 1e-14 * std::max(next, 1e-300)) {
      if (++settled >= 4) return next;
    } else {
      settled = 0;
    }
    sigma = next;
  }
  throw ConvergenceError("residual_operator_norm: power iteration stalled");
}

void require_order(const ProblemInstance& inst, const Matrix& x,
                   const char* who) {
  if (x.rows() != inst.order() || x.cols() != inst.order())
    throw DimensionError(std::string(who) + ": X has the wrong order");
}

}  // namespace

ProblemInstance::ProblemInstance(const SpdMatrix& j, const SkewMatrix& m,
                                 std::optional<RotationMatrix> known_solution,
                                 std::string label,
                                 std::optional<double> c_norm_hint)
    : j_(j.matrix()),
      m_(m.matrix()),
      known_solution_(std::move(known_solution)),
      label_(std::move(label)) {
  if (j_.rows() != m_.rows())
    throw DimensionError("ProblemInstance: J and M must have equal order");
  jm_ = j_ * m_;
  j2_ = j_ * j_;
  trace_m2_ = -m_.squaredNorm();  // tr(M^2) = -||M||_F^2 for skew M
  alpha_ = 2.0 * j2_.trace() - trace_m2_;
  c_norm_ = c_norm_hint ? *c_norm_hint : residual_operator_norm(j_);
  if (known_solution_) {
    const Matrix& xs = known_solution_->matrix();
    if (xs.rows() != j_.rows())
      throw DimensionError("ProblemInstance: known solution order mismatch");
    const double res = (xs * j_ - j_ * xs.transpose() - m_).norm();
    if (res > 1e-10 * std::max(m_.norm(), 1e-300))
      throw ValidationError(
          "ProblemInstance: known solution does not satisfy the equation");
  }
}

double objective_full(const ProblemInstance& inst, const Matrix& x) {
  require_order(inst, x, "objective_full");
  const Matrix xj = x * inst.J();
  // 2 tr(J X^T X J) - 2 tr(XJXJ) + 4 tr(MXJ) - tr(M^2), one product only
  return 2.0 * xj.squaredNorm() - 2.0 * trace_product(xj, xj) +
         4.0 * trace_product(inst.M(), xj) - inst.trace_m2();
}

double objective_restricted(const ProblemInstance& inst, const Matrix& x) {
  require_order(inst, x, "objective_restricted");
  const Matrix jx = inst.J() * x;
  return -2.0 * trace_product(jx, jx) + 4.0 * trace_product(x, inst.JM()) +
         inst.alpha();
}

Matrix gradient_full(const ProblemInstance& inst, const Matrix& x) {
  require_order(inst, x, "gradient_full");
  // MJ = -(JM)^T for symmetric J, skew M
  return 4.0 * x * inst.J2() - 4.0 * inst.J() * x.transpose() * inst.J() +
         4.0 * inst.JM().transpose();
}

Matrix gradient_restricted(const ProblemInstance& inst, const Matrix& x) {
  require_order(inst, x, "gradient_restricted");
  return -4.0 * inst.J() * x.transpose() * inst.J() +
         4.0 * inst.JM().transpose();
}

SkewMatrix riemannian_gradient(const ProblemInstance& inst, const Matrix& x,
                               GradientKind which) {
  const Matrix g = (which == GradientKind::Full)
                       ? gradient_full(inst, x)
                       : gradient_restricted(inst, x);
  return SkewMatrix(g * x.transpose() - x * g.transpose());
}

ResidualReport residual(const ProblemInstance& inst, const Matrix& x) {
  require_order(inst, x, "residual");
  ResidualReport rep;
  rep.R = x * inst.J() - inst.J() * x.transpose() - inst.M();
  rep.frob = rep.R.norm();
  rep.c_norm = inst.c_norm();
  const double n = static_cast<double>(inst.order());
  if (rep.c_norm > 0.0) {
    rep.rel_res = rep.frob / (std::sqrt(n) * rep.c_norm);
  } else {
    rep.rel_res = (rep.frob == 0.0)
                      ? 0.0
                      : std::numeric_limits<double>::infinity();
  }
  return rep;
}

Matrix hamiltonian_matrix(const ProblemInstance& inst) {
  const Index n = inst.order();
  Matrix h(2 * n, 2 * n);
  h.topLeftCorner(n, n) = 0.5 * inst.M();
  h.topRightCorner(n, n) = Matrix::Identity(n, n);
  h.bottomLeftCorner(n, n) = 0.25 * inst.M() * inst.M() + inst.J2();
  h.bottomRightCorner(n, n) = 0.5 * inst.M();
  return h;
}

HamiltonianDiagnosis hamiltonian_diagnose(const ProblemInstance& inst,
                                          double imag_tolerance) {
  HamiltonianDiagnosis d;
  d.H = hamiltonian_matrix(inst);
  if (imag_tolerance <= 0.0) imag_tolerance = 1e-8 * spectral_norm(d.H);
  d.imag_tolerance = imag_tolerance;
  Eigen::EigenSolver<Matrix> es(d.H, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw ConvergenceError("hamiltonian_diagnose: eigensolver failed");
  d.eigenvalues = es.eigenvalues();
  Index on_axis = 0;
  for (Index i = 0; i < d.eigenvalues.size(); ++i)
    if (std::abs(d.eigenvalues(i).real()) <= imag_tolerance) ++on_axis;
  if (on_axis == 0)
    d.classification = SpectrumClass::NoPureImaginary;
  else if (on_axis == d.eigenvalues.size())
    d.classification = SpectrumClass::AllPureImaginary;
  else
    d.classification = SpectrumClass::PureImaginaryPresent;
  return d;
}

bool direct_method_condition(const ProblemInstance& inst) {
  Matrix s = 0.25 * inst.M() * inst.M() + inst.J2();
  s = 0.5 * (s + s.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> es(s, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() > 0.0;
}

std::vector<RotationMatrix> solve_so2_closed_form(const ProblemInstance& inst) {
  if (inst.order() != 2)
    throw DimensionError("solve_so2_closed_form: instance must have order 2");
  const double t = inst.J().trace();  // j1 + j3
  if (std::abs(t) < 1e-14)
    throw DegenerateInstance("solve_so2_closed_form: trace(J) is zero");
  const double m1 = inst.M()(0, 1);
  if (std::abs(m1) > std::abs(t)) return {};  // |sin| would exceed 1
  // With X = [[c, -s], [s, c]] the residual top-right entry is -s(j1+j3)-m1,
  // independent of j2; the sign of s is validated below.
  const double c = std::sqrt(std::max(0.0, 1.0 - (m1 / t) * (m1 / t)));
  std::vector<RotationMatrix> out;
  for (double s : {-m1 / t, m1 / t}) {
    Matrix x(2, 2);
    x << c, -s, s, c;
    Matrix y(2, 2);
    y << -c, -s, s, -c;
    const double res_x = residual(inst, x).rel_res;
    const double res_y = residual(inst, y).rel_res;
    if (std::max(res_x, res_y) <= 1e-12) {
      out.emplace_back(RotationMatrix(x));
      out.emplace_back(RotationMatrix(y));
      break;
    }
  }
  if (out.empty())
    throw DegenerateInstance(
        "solve_so2_closed_form: no sign convention verified; inconsistent M");
  return out;
}

bool convexity_probe(const ProblemInstance& inst, const Matrix& x1,
                     const Matrix& x2, std::span<const double> t_grid) {
  const double f1 = objective_full(inst, x1);
  const double f2 = objective_full(inst, x2);
  const double slack = 1e-9 * (1.0 + std::abs(f1) + std::abs(f2));
  for (double t : t_grid) {
    const Matrix xt = t * x1 + (1.0 - t) * x2;
    if (objective_full(inst, xt) > t * f1 + (1.0 - t) * f2 + slack)
      return false;
  }
  return true;
}

const char* to_string(SpectrumClass c) {
  switch (c) {
    case SpectrumClass::NoPureImaginary:
      return "no_pure_imaginary";
    case SpectrumClass::PureImaginaryPresent:
      return "pure_imaginary_present";
    case SpectrumClass::AllPureImaginary:
      return "all_pure_imaginary";
  }
  return "unknown";
}

}  // namespace mvsolve
