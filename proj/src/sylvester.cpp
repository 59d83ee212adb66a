#include "mvsolve/sylvester.hpp"

#include <cmath>

namespace mvsolve {

namespace {

// B * P for the commutation matrix P, applied as a column permutation:
// (B P) column (i + j*n) is B column (j + i*n).
Matrix apply_commutation_right(const Matrix& b, Index n) {
  Matrix out(b.rows(), b.cols());
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      out.col(i + j * n) = b.col(j + i * n);
  return out;
}

}  // namespace

CongruenceSylvesterSolver::CongruenceSylvesterSolver(const Matrix& a1,
                                                     const Matrix& a2) {
  if (a1.rows() != a1.cols() || a2.rows() != a2.cols() ||
      a1.rows() != a2.rows())
    throw DimensionError(
        "CongruenceSylvesterSolver: A1 and A2 must be square of equal order");
  n_ = a1.rows();
  const Matrix id = Matrix::Identity(n_, n_);
  Matrix op = kronecker(id, a1) +
              apply_commutation_right(kronecker(a2.transpose(), id), n_);
  lu_.compute(op);
  // rcond() is meaningless once a pivot collapses, so guard it explicitly
  const auto pivots = lu_.matrixLU().diagonal().cwiseAbs();
  const double max_piv = pivots.maxCoeff();
  const double min_piv = pivots.minCoeff();
  const double rcond = lu_.rcond();
  if (min_piv <= max_piv * 1e-300 || !(rcond > 0.0) || !std::isfinite(rcond))
    cond_ = std::numeric_limits<double>::infinity();
  else
    cond_ = 1.0 / rcond;
  if (!(cond_ < 1e12))
    throw SingularSystem(
        "congruence-Sylvester operator is singular or near-singular "
        "(condition estimate " +
            std::to_string(cond_) + ")",
        cond_);
}

Matrix CongruenceSylvesterSolver::solve(const Matrix& a3) const {
  if (a3.rows() != n_ || a3.cols() != n_)
    throw DimensionError("CongruenceSylvesterSolver: A3 has the wrong order");
  const Vector rhs = Eigen::Map<const Vector>(a3.data(), n_ * n_);
  const Vector y = lu_.solve(rhs);
  return Eigen::Map<const Matrix>(y.data(), n_, n_);
}

Matrix solve_congruence(const CongruenceSylvesterSystem& sys) {
  if (sys.a3.rows() != sys.a1.rows() || sys.a3.cols() != sys.a1.rows())
    throw DimensionError("solve_congruence: A3 order mismatch");
  CongruenceSylvesterSolver solver(sys.a1, sys.a2);
  return solver.solve(sys.a3);
}

CongruenceSylvesterSystem build_soc_system(const ProblemInstance& inst,
                                           const Matrix& c, double r) {
  if (r <= 0.0) throw ValidationError("build_soc_system: r must be positive");
  if (c.rows() != inst.order() || c.cols() != inst.order())
    throw DimensionError("build_soc_system: C has the wrong order");
  const Matrix& j = inst.J();
  const Matrix jinv =
      Eigen::LLT<Matrix>(j).solve(Matrix::Identity(inst.order(), inst.order()));
  CongruenceSylvesterSystem sys;
  sys.a1 = -4.0 * j;
  sys.a2 = 4.0 * j + r * jinv;
  sys.a3 = 4.0 * inst.M() - r * c * jinv;
  return sys;
}

Matrix vectorized_soc_operator(const ProblemInstance& inst, double r) {
  const Index n = inst.order();
  if (n > 40)
    throw SizeLimit("vectorized_soc_operator: dense assembly capped at n=40");
  const Matrix id = Matrix::Identity(n, n);
  return kronecker(4.0 * inst.J2() + r * id, id) -
         4.0 * apply_commutation_right(kronecker(inst.J(), inst.J()), n);
}

}  // namespace mvsolve
