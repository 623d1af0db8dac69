#ifndef LRDMD_LINALG_HPP
#define LRDMD_LINALG_HPP

#include "lrdmd/eigen.hpp"

namespace lrdmd {

inline constexpr double default_rank_tol = 1e-12;

// Thin SVD  M = U diag(S) V^T.
//
// For a p x q input with p >= q, U is p x q and V is q x q. For p < q the
// decomposition of M^T is computed and the factors are swapped, so U is p x p
// and V is q x p; `transposed` records that. Either way M = U diag(S) V^T.
//
// Each column of U has its largest-magnitude entry (lowest index on ties)
// non-negative, V follows.
struct ThinSVD {
  Matrix U;
  Vector S;
  Matrix V;
  bool transposed = false;

  Index rows() const { return U.rows(); }
  Index cols() const { return V.rows(); }
  Matrix reconstruct() const;
};

ThinSVD thin_svd(const Matrix& M);

// Number of singular values above rel_tol * sigma_1.
Index numerical_rank(const ThinSVD& svd, double rel_tol = default_rank_tol);

// Moore-Penrose pseudo-inverse V S^+ U^T, q x p.
Matrix pinv(const ThinSVD& svd, double rel_tol = default_rank_tol);

// Orthogonal projector onto the row space of the decomposed matrix (q x q).
Matrix row_space_projector(const ThinSVD& svd, double rel_tol = default_rank_tol);

// Eigenpairs of a small real square matrix. Values are ordered by descending
// modulus with the positive-imaginary member of a conjugate pair first.
// Vectors have unit norm; their largest entry is rotated to the positive real axis.
struct ComplexEigenSet {
  ComplexVector values;
  ComplexMatrix vectors;

  Index size() const { return values.size(); }
};

ComplexEigenSet eig_nonsymmetric(const Matrix& M);

// Strict weak ordering used for every eigenvalue list in the library.
bool eigenvalue_before(const Complex& a, const Complex& b);

// Throws InvalidInput if M is empty or holds NaN/Inf.
void require_finite(const Matrix& M, const char* what);

}  // namespace lrdmd

#endif
