#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mvsolve/linalg.hpp"
#include "mvsolve/types.hpp"

namespace mvsolve {

// One equation X J - J X^T = M to be solved for X in SO(n), with J symmetric
// positive definite and M skew-symmetric. Derived constants used by the
// objective/residual evaluations (alpha, J*M, J^2, trace(M^2) and the
// residual normalization ||J (x) I - (I (x) J) P||_2) are computed eagerly at
// construction, so instances are immutable and freely shareable.
class ProblemInstance {
 public:
  ProblemInstance(const SpdMatrix& j, const SkewMatrix& m,
                  std::optional<RotationMatrix> known_solution = {},
                  std::string label = {},
                  std::optional<double> c_norm_hint = {});

  Index order() const noexcept { return j_.rows(); }
  const Matrix& J() const noexcept { return j_; }
  const Matrix& M() const noexcept { return m_; }
  const std::optional<RotationMatrix>& known_solution() const noexcept {
    return known_solution_;
  }
  const std::string& label() const noexcept { return label_; }

  double alpha() const noexcept { return alpha_; }      // 2 tr(J^2) - tr(M^2)
  const Matrix& JM() const noexcept { return jm_; }
  const Matrix& J2() const noexcept { return j2_; }
  double trace_m2() const noexcept { return trace_m2_; }
  double c_norm() const noexcept { return c_norm_; }

 private:
  Matrix j_, m_;
  std::optional<RotationMatrix> known_solution_;
  std::string label_;
  Matrix jm_, j2_;
  double alpha_ = 0.0;
  double trace_m2_ = 0.0;
  double c_norm_ = 0.0;
};

// F(X) = ||XJ - JX^T - M||_F^2 through its trace expansion; defined for all
// square X, orthogonal or not.
double objective_full(const ProblemInstance& inst, const Matrix& x);

// Restriction of F to the orthogonal group:
// -2 tr((JX)^2) + 4 tr(XJM) + alpha. Agrees with objective_full on O(n).
double objective_restricted(const ProblemInstance& inst, const Matrix& x);

// grad F(X) = 4XJ^2 - 4JX^TJ - 4MJ. Satisfies grad F = 4 R(X) J.
Matrix gradient_full(const ProblemInstance& inst, const Matrix& x);

// Derivative of the restricted objective: -4JX^TJ - 4MJ.
Matrix gradient_restricted(const ProblemInstance& inst, const Matrix& x);

enum class GradientKind { Full, Restricted };

// Riemannian gradient G X^T - X G^T for the chosen Euclidean gradient G.
// The two kinds coincide: their difference 4XJ^2 drops out of the lift.
SkewMatrix riemannian_gradient(const ProblemInstance& inst, const Matrix& x,
                               GradientKind which);

struct ResidualReport {
  Matrix R;        // X J - J X^T - M
  double frob;     // ||R||_F
  double rel_res;  // ||R||_F / (sqrt(n) * c_norm)
  double c_norm;
};

// Residual R(X) and the relative residual rho(X). When c_norm degenerates to
// zero (n = 1), rho is 0 for an exact solution and +inf otherwise.
ResidualReport residual(const ProblemInstance& inst, const Matrix& x);

enum class SpectrumClass {
  NoPureImaginary,
  PureImaginaryPresent,
  AllPureImaginary,
};

struct HamiltonianDiagnosis {
  Matrix H;  // [[M/2, I], [M^2/4 + J^2, M/2]]
  Eigen::VectorXcd eigenvalues;
  SpectrumClass classification;
  double imag_tolerance;
};

Matrix hamiltonian_matrix(const ProblemInstance& inst);

// Eigenvalues of the 2n x 2n Hamiltonian block matrix and a classification of
// how many of them sit on the imaginary axis (|Re| <= imag_tolerance).
// Pass imag_tolerance <= 0 to use the default 1e-8 * ||H||_2.
HamiltonianDiagnosis hamiltonian_diagnose(const ProblemInstance& inst,
                                          double imag_tolerance = 0.0);

// True iff M^2/4 + J^2 (symmetrized) is positive definite, the applicability
// condition of the Riccati-based direct methods.
bool direct_method_condition(const ProblemInstance& inst);

// Closed-form SO(2) solutions. Returns both rotations when they exist and an
// empty list when |m1| > j1 + j3; the sign of the sine entry is fixed by
// direct residual verification rather than trusted from a formula.
std::vector<RotationMatrix> solve_so2_closed_form(const ProblemInstance& inst);

// Checks the convexity segment inequality
// F(t X1 + (1-t) X2) <= t F(X1) + (1-t) F(X2) + slack on the given t grid.
bool convexity_probe(const ProblemInstance& inst, const Matrix& x1,
                     const Matrix& x2, std::span<const double> t_grid);

const char* to_string(SpectrumClass c);

}  // namespace mvsolve
