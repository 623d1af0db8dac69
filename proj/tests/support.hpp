#ifndef LRDMD_TESTS_SUPPORT_HPP
#define LRDMD_TESTS_SUPPORT_HPP

// Random instances and dense reference computations shared by the tests.
// The oracles avoid the library's SVD: they use Eigen's BDCSVD and symmetric
// eigensolver and form n x n matrices freely.

#include "lrdmd/rng.hpp"
#include "lrdmd/snapshots.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace lrdmd::testing {

// X of rank rank_x (full rank when rank_x >= min(n, m)), Y standard normal.
inline SnapshotPair random_instance(Rng& rng, Index n, Index m, Index rank_x) {
  Matrix X;
  if (rank_x >= std::min(n, m))
    X = rng.normal_matrix(n, m);
  else
    X = rng.normal_matrix(n, rank_x) * rng.normal_matrix(rank_x, m);
  Matrix Y = rng.normal_matrix(n, m);
  return SnapshotPair(std::move(X), std::move(Y));
}

inline Matrix oracle_pinv(const Matrix& A, double rel_tol = 1e-12) {
  Eigen::BDCSVD<Matrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  Vector inv = Vector::Zero(s.size());
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) inv(i) = 1.0 / s(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

// Best rank-k approximation of a dense matrix.
inline Matrix oracle_truncate(const Matrix& A, Index k) {
  Eigen::BDCSVD<Matrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Index r = std::min<Index>(k, svd.singularValues().size());
  return svd.matrixU().leftCols(r) * svd.singularValues().head(r).asDiagonal() *
         svd.matrixV().leftCols(r).transpose();
}

// Optimal rank-k operator through the Gram matrix Z Z^T: its leading k
// eigenvectors span the same subspace as the leading left singular vectors of Z.
inline Matrix oracle_optimal_gram(const SnapshotPair& d, Index k, double rel_tol = 1e-12) {
  const Matrix Xp = oracle_pinv(d.X(), rel_tol);
  const Matrix Z = d.Y() * (Xp * d.X());
  Eigen::SelfAdjointEigenSolver<Matrix> es(Z * Z.transpose());
  const Matrix Pk = es.eigenvectors().rightCols(k);  // ascending order
  return Pk * Pk.transpose() * d.Y() * Xp;
}

inline Matrix oracle_truncated(const SnapshotPair& d, Index k) {
  return oracle_truncate(d.Y() * oracle_pinv(d.X()), k);
}

// U_X trunc_k(U_X^T Y V_X) S_X^+ U_X^T with the thin factors of X.
inline Matrix oracle_projected(const SnapshotPair& d, Index k, double rel_tol = 1e-12) {
  Eigen::BDCSVD<Matrix> svd(d.X(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Matrix& U = svd.matrixU();
  const Matrix& V = svd.matrixV();
  const Vector& s = svd.singularValues();
  Vector inv = Vector::Zero(s.size());
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) inv(i) = 1.0 / s(i);
  const Matrix B = U.transpose() * d.Y() * V;
  return U * oracle_truncate(B, k) * inv.asDiagonal() * U.transpose();
}

// Sum of squared singular values of Z beyond k plus the unreachable part.
inline double oracle_closed_form_sq(const SnapshotPair& d, Index k, double rel_tol = 1e-12) {
  const Matrix Pr = oracle_pinv(d.X(), rel_tol) * d.X();
  const Matrix Z = d.Y() * Pr;
  Eigen::BDCSVD<Matrix> svd(Z);
  double tail = 0.0;
  for (Index i = k; i < svd.singularValues().size(); ++i) tail += svd.singularValues()(i) * svd.singularValues()(i);
  return tail + (d.Y() - Z).squaredNorm();
}

inline double dense_error(const Matrix& A, const SnapshotPair& d) { return (d.Y() - A * d.X()).norm(); }

// Largest principal angle between the column spans of A and B, in radians.
inline double subspace_angle(const ComplexMatrix& A, const ComplexMatrix& B) {
  Eigen::HouseholderQR<ComplexMatrix> qa(A), qb(B);
  const ComplexMatrix Qa = qa.householderQ() * ComplexMatrix::Identity(A.rows(), A.cols());
  const ComplexMatrix Qb = qb.householderQ() * ComplexMatrix::Identity(B.rows(), B.cols());
  Eigen::JacobiSVD<ComplexMatrix> svd(Qa.adjoint() * Qb);
  const double c = std::clamp(svd.singularValues().minCoeff(), 0.0, 1.0);
  return std::acos(c);
}

// Largest distance between two eigenvalue multisets under greedy nearest matching.
inline double multiset_distance(std::vector<Complex> a, std::vector<Complex> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (const Complex& x : a) {
    auto it = std::min_element(b.begin(), b.end(),
                               [&](const Complex& p, const Complex& q) { return std::abs(p - x) < std::abs(q - x); });
    worst = std::max(worst, std::abs(*it - x));
    b.erase(it);
  }
  return worst;
}

inline double vector_angle(const ComplexVector& a, const ComplexVector& b) {
  const double c = std::abs(a.dot(b)) / (a.norm() * b.norm());
  return std::acos(std::clamp(c, 0.0, 1.0));
}

}  // namespace lrdmd::testing

#endif
