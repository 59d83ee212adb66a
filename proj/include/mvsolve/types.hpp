#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>

#include "mvsolve/errors.hpp"

namespace mvsolve {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Deterministic N(0,1) stream (mt19937_64 + Box-Muller). The standard library
// normal_distribution is implementation-defined, which would break
// byte-identical suite regeneration across toolchains.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : gen_(seed) {}

  double next() {
    const double u1 = uniform01();  // in (0,1], so log() is finite
    const double u2 = uniform01();
    constexpr double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }

  Matrix matrix(Index rows, Index cols) {
    Matrix g(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) g(i, j) = next();
    return g;
  }

 private:
  double uniform01() {
    return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
  }

  std::mt19937_64 gen_;
};

// Skew-symmetric matrix. Construction symmetrizes S <- (S - S^T)/2, so
// S + S^T = 0 holds exactly entrywise afterwards.
class SkewMatrix {
 public:
  explicit SkewMatrix(const Matrix& s) {
    if (s.rows() != s.cols())
      throw DimensionError("SkewMatrix: input must be square");
    m_ = 0.5 * (s - s.transpose()).eval();
  }

  static SkewMatrix zero(Index n) { return SkewMatrix(Matrix::Zero(n, n)); }

  const Matrix& matrix() const noexcept { return m_; }
  Index order() const noexcept { return m_.rows(); }

 private:
  Matrix m_;
};

// Symmetric positive definite matrix. Symmetry is required within
// 1e-13 * ||A||_F on input, enforced exactly by averaging, and positivity is
// checked through a Cholesky factorization.
class SpdMatrix {
 public:
  explicit SpdMatrix(const Matrix& a) {
    if (a.rows() != a.cols())
      throw DimensionError("SpdMatrix: input must be square");
    const double scale = a.norm();
    if ((a - a.transpose()).norm() > 1e-13 * std::max(scale, 1e-300))
      throw ValidationError("SpdMatrix: input is not symmetric");
    m_ = 0.5 * (a + a.transpose()).eval();
    Eigen::LLT<Matrix> llt(m_);
    if (llt.info() != Eigen::Success)
      throw ValidationError("SpdMatrix: input is not positive definite");
  }

  const Matrix& matrix() const noexcept { return m_; }
  Index order() const noexcept { return m_.rows(); }

 private:
  Matrix m_;
};

// Matrix kept within tolerance of the special orthogonal group. The
// validating constructor enforces ||X^T X - I||_F <= tol (default
// 1e-10 * sqrt(n)) and det(X) > 0; from_iterate() wraps a solver iterate
// without a hard gate and records the measured defect instead.
class RotationMatrix {
 public:
  RotationMatrix() = default;  // empty placeholder, filled by solvers/reports

  explicit RotationMatrix(const Matrix& x, double tol = -1.0) {
    if (x.rows() != x.cols())
      throw DimensionError("RotationMatrix: input must be square");
    const Index n = x.rows();
    if (tol < 0.0) tol = 1e-10 * std::sqrt(static_cast<double>(n));
    init(x);
    if (defect_ > tol)
      throw ValidationError("RotationMatrix: orthogonality defect " +
                            std::to_string(defect_) + " exceeds tolerance");
    if (det_ <= 0.0)
      throw ValidationError("RotationMatrix: determinant is not positive");
  }

  static RotationMatrix identity(Index n) {
    return RotationMatrix(Matrix::Identity(n, n));
  }

  static RotationMatrix from_iterate(const Matrix& x) {
    if (x.rows() != x.cols())
      throw DimensionError("RotationMatrix: input must be square");
    RotationMatrix r;
    r.init(x);
    return r;
  }

  const Matrix& matrix() const noexcept { return m_; }
  Index order() const noexcept { return m_.rows(); }
  double orthogonality_defect() const noexcept { return defect_; }
  double determinant() const noexcept { return det_; }

 private:
  void init(const Matrix& x) {
    m_ = x;
    defect_ = (x.transpose() * x - Matrix::Identity(x.rows(), x.cols())).norm();
    det_ = x.determinant();
  }

  Matrix m_;
  double defect_ = 0.0;
  double det_ = 1.0;
};

}  // namespace mvsolve
