#include "mvsolve/linalg.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace mvsolve {

Matrix project_to_orthogonal(const Matrix& a, bool special_orthogonal) {
  if (a.rows() != a.cols())
    throw DimensionError("project_to_orthogonal: input must be square");
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const Index n = a.rows();
  if (sv(n - 1) <= 1e-14 * sv(0))
    throw DegenerateProjection(
        "project_to_orthogonal: input is numerically rank deficient");
  Matrix u = svd.matrixU();
  const Matrix& v = svd.matrixV();
  if (special_orthogonal) {
    const double det = (u * v.transpose()).determinant();
    if (det < 0.0) u.col(n - 1) *= -1.0;  // column of the smallest sigma
  }
  return u * v.transpose();
}

Matrix commutation_matrix(Index n) {
  if (n < 1) throw DimensionError("commutation_matrix: n must be >= 1");
  Matrix p = Matrix::Zero(n * n, n * n);
  // column-major vec: vec(A)[i + j*n] = A(i,j), so e_{i+jn} -> e_{j+in}
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) p(j + i * n, i + j * n) = 1.0;
  return p;
}

Matrix kronecker(const Matrix& a, const Matrix& b) {
  Matrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}

double trace_product(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols())
    throw DimensionError("trace_product: A must be m x n and B n x m");
  return (a.array() * b.transpose().array()).sum();
}

Matrix expm_skew_rodrigues(const Matrix& s) {
  if (s.rows() != 3 || s.cols() != 3)
    throw DimensionError("expm_skew_rodrigues: input must be 3x3");
  const double x = s(2, 1), y = s(0, 2), z = s(1, 0);
  const double theta2 = x * x + y * y + z * z;
  const double theta = std::sqrt(theta2);
  double c1, c2;  // sin(t)/t and (1-cos(t))/t^2
  if (theta < 1e-4) {
    c1 = 1.0 - theta2 / 6.0 + theta2 * theta2 / 120.0;
    c2 = 0.5 - theta2 / 24.0 + theta2 * theta2 / 720.0;
  } else {
    c1 = std::sin(theta) / theta;
    c2 = (1.0 - std::cos(theta)) / theta2;
  }
  return Matrix::Identity(3, 3) + c1 * s + c2 * (s * s);
}

Matrix expm_skew_scaled_pade(const Matrix& s) {
  if (s.rows() != s.cols())
    throw DimensionError("expm_skew_scaled_pade: input must be square");
  const Index n = s.rows();
  const double norm = s.norm();
  if (norm == 0.0) return Matrix::Identity(n, n);
  // scale so that ||S/2^k||_F <= 0.5 before the degree-13 approximant
  int squarings = 0;
  if (norm > 0.5) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  }
  const Matrix a = s / std::ldexp(1.0, squarings);

  static const double b[] = {64764752532480000.0, 32382376266240000.0,
                             7771770303897600.0,  1187353796428800.0,
                             129060195264000.0,   10559470521600.0,
                             670442572800.0,      33522128640.0,
                             1323241920.0,        40840800.0,
                             960960.0,            16380.0,
                             182.0,               1.0};
  const Matrix id = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a2 * a4;
  const Matrix u =
      a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 +
           b[5] * a4 + b[3] * a2 + b[1] * id);
  const Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 +
                   b[4] * a4 + b[2] * a2 + b[0] * id;
  // (V - U) is nonsingular for skew input: eigenvalues come in +-i*t pairs
  Matrix e = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < squarings; ++i) e = (e * e).eval();
  return e;
}

RotationMatrix expm_skew(const SkewMatrix& s) {
  const Matrix& m = s.matrix();
  Matrix e = (m.rows() == 3) ? expm_skew_rodrigues(m) : expm_skew_scaled_pade(m);
  const double tol = 1e-12 * std::sqrt(static_cast<double>(m.rows()));
  return RotationMatrix(e, std::max(tol, 1e-15));
}

namespace {

double power_iteration_norm(const Matrix& a) {
  const Index n = a.cols();
  GaussianStream start(0x9e3779b97f4a7c15ull);  // fixed: deterministic result
  Vector v = start.matrix(n, 1);
  v.normalize();
  double sigma = 0.0;
  int settled = 0;
  constexpr int kMaxIter = 20000;
  for (int it = 0; it < kMaxIter; ++it) {
    Vector u = a * v;
    Vector w = a.transpose() * u;
    const double wn = w.norm();
    if (wn == 0.0) return 0.0;  // hit the null space: A^T A v = 0
    v = w / wn;
    const double next = std::sqrt(wn);  // Rayleigh quotient of A^T A
    if (std::abs(next - sigma) <= 1e-14 * std::max(next, 1e-300)) {
      if (++settled >= 4) return next;
    } else {
      settled = 0;
    }
    sigma = next;
  }
  throw ConvergenceError("spectral_norm: power iteration did not settle");
}

}  // namespace

double spectral_norm(const Matrix& a) {
  if (a.size() == 0) throw DimensionError("spectral_norm: empty matrix");
  if (a.isZero(0.0)) return 0.0;
  if (std::max(a.rows(), a.cols()) <= 128) {
    Eigen::BDCSVD<Matrix> svd(a);
    return svd.singularValues()(0);
  }
  return power_iteration_norm(a);
}

RotationMatrix random_rotation(Index n, std::uint64_t seed) {
  if (n < 1) throw DimensionError("random_rotation: n must be >= 1");
  GaussianStream g(seed);
  Matrix a = g.matrix(n, n);
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j)
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  if (n >= 2 && q.determinant() < 0.0) q.col(0).swap(q.col(1));
  return RotationMatrix(q, 1e-12 * std::sqrt(static_cast<double>(n)));
}

SpdMatrix random_spd(Index n, std::uint64_t seed, double condition_target) {
  if (n < 1) throw DimensionError("random_spd: n must be >= 1");
  if (condition_target < 1.0)
    throw ValidationError("random_spd: condition_target must be >= 1");
  const Matrix q = random_rotation(n, seed).matrix();
  Vector lambda(n);
  const double logc = std::log(condition_target);
  for (Index i = 0; i < n; ++i) {
    const double t = (n == 1) ? 0.0
                              : static_cast<double>(i) /
                                    static_cast<double>(n - 1);
    lambda(i) = std::exp(t * logc);
  }
  return SpdMatrix(q * lambda.asDiagonal() * q.transpose());
}

SkewMatrix random_skew(Index n, std::uint64_t seed) {
  if (n < 1) throw DimensionError("random_skew: n must be >= 1");
  GaussianStream g(seed);
  return SkewMatrix(g.matrix(n, n));  // constructor takes the skew part
}

}  // namespace mvsolve
