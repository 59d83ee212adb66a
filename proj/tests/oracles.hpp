// Test-only oracles, kept independent of the implementation paths they check.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>

#include "mvsolve/types.hpp"

namespace oracles {

using mvsolve::Index;
using mvsolve::Matrix;

// Central finite differences of a scalar function of a matrix.
inline Matrix finite_difference_gradient(
    const std::function<double(const Matrix&)>& f, const Matrix& x,
    double h = 1e-6) {
  Matrix g(x.rows(), x.cols());
  Matrix xp = x;
  for (Index i = 0; i < x.rows(); ++i)
    for (Index j = 0; j < x.cols(); ++j) {
      const double orig = x(i, j);
      xp(i, j) = orig + h;
      const double fp = f(xp);
      xp(i, j) = orig - h;
      const double fm = f(xp);
      xp(i, j) = orig;
      g(i, j) = (fp - fm) / (2.0 * h);
    }
  return g;
}

// Truncated Taylor series of the matrix exponential (degree 30). Accurate to
// well below 1e-13 for ||S|| up to about 2.
inline Matrix taylor_expm(const Matrix& s, int degree = 30) {
  Matrix sum = Matrix::Identity(s.rows(), s.cols());
  Matrix term = sum;
  for (int k = 1; k <= degree; ++k) {
    term = (term * s / static_cast<double>(k)).eval();
    sum += term;
  }
  return sum;
}

// Polar factor of A through a symmetric eigendecomposition of A^T A:
// Q = A (A^T A)^{-1/2}, the closest orthogonal matrix to A.
inline Matrix polar_factor(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.transpose() * a);
  const auto& vals = es.eigenvalues();
  Matrix inv_sqrt = es.eigenvectors() *
                    vals.cwiseSqrt().cwiseInverse().asDiagonal() *
                    es.eigenvectors().transpose();
  return a * inv_sqrt;
}

// Minimum of theta -> ||X(theta) J - J X(theta)^T - M||_F^2 over a uniform
// grid of planar rotations.
inline double so2_grid_min_objective(const Matrix& j, const Matrix& m,
                                     int grid_points = 10000) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid_points; ++i) {
    const double theta =
        2.0 * M_PI * static_cast<double>(i) / static_cast<double>(grid_points);
    Matrix x(2, 2);
    x << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    best = std::min(best, (x * j - j * x.transpose() - m).squaredNorm());
  }
  return best;
}

// Column-stacking vec.
inline mvsolve::Vector vec(const Matrix& a) {
  return Eigen::Map<const mvsolve::Vector>(a.data(), a.size());
}

}  // namespace oracles
