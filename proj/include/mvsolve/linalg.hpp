#pragma once

#include <cstdint>

#include "mvsolve/types.hpp"

namespace mvsolve {

// Nearest orthogonal matrix UV^T from the SVD A = UDV^T. With
// special_orthogonal the column of U paired with the smallest singular value
// is negated when needed so that det(UV^T) = +1.
// Throws DegenerateProjection when A is rank deficient (projection not
// unique), i.e. when some singular value is <= 1e-14 * ||A||_2.
Matrix project_to_orthogonal(const Matrix& a, bool special_orthogonal = false);

// Commutation (permutation) matrix P of order n^2 with P * vec(A) = vec(A^T).
Matrix commutation_matrix(Index n);

// Kronecker product A (x) B.
Matrix kronecker(const Matrix& a, const Matrix& b);

// trace(A*B) in O(mn) as sum(A o B^T) without forming the product.
// A must be m x n and B n x m.
double trace_product(const Matrix& a, const Matrix& b);

// Exponential of a skew-symmetric matrix: Rodrigues for n = 3, otherwise
// scaling-and-squaring with a degree-13 Pade approximant.
RotationMatrix expm_skew(const SkewMatrix& s);

// The two routes behind expm_skew, exposed so they can be cross-checked.
Matrix expm_skew_rodrigues(const Matrix& s);     // 3x3 only
Matrix expm_skew_scaled_pade(const Matrix& s);   // any order

// Largest singular value: full SVD for small matrices, otherwise power
// iteration on A^T A from a deterministic start vector.
// Throws ConvergenceError if the power iteration does not settle.
double spectral_norm(const Matrix& a);

// Seeded Haar-plausible rotation: QR of a Gaussian matrix with the
// positive-diagonal sign convention, determinant fixed to +1 by swapping the
// first two columns when necessary.
RotationMatrix random_rotation(Index n, std::uint64_t seed);

// Q diag(lambda) Q^T with Q a seeded random rotation and lambda log-spaced in
// [1, condition_target].
SpdMatrix random_spd(Index n, std::uint64_t seed, double condition_target);

// (G - G^T)/2 for a seeded Gaussian G.
SkewMatrix random_skew(Index n, std::uint64_t seed);

}  // namespace mvsolve
