#include "lrdmd/linalg.hpp"
#include "lrdmd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace lrdmd {
namespace {

// Index of the largest |entry|; the first one wins ties.
template <typename Vec>
Index dominant_entry(const Vec& v) {
  Index best = 0;
  double best_abs = -1.0;
  for (Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v(i));
    if (a > best_abs) {
      best_abs = a;
      best = i;
    }
  }
  return best;
}

}  // namespace

void require_finite(const Matrix& M, const char* what) {
  if (M.rows() == 0 || M.cols() == 0)
    throw InvalidInput(std::string(what) + ": empty matrix");
  if (!M.allFinite()) throw InvalidInput(std::string(what) + ": non-finite entries");
}

Matrix ThinSVD::reconstruct() const { return U * S.asDiagonal() * V.transpose(); }

ThinSVD thin_svd(const Matrix& M) {
  require_finite(M, "thin_svd");

  ThinSVD out;
  out.transposed = M.rows() < M.cols();
  {
    const unsigned opts = Eigen::ComputeThinU | Eigen::ComputeThinV;
    if (out.transposed) {
      Eigen::JacobiSVD<Matrix> svd(M.transpose(), opts);
      out.U = svd.matrixV();
      out.V = svd.matrixU();
      out.S = svd.singularValues();
    } else {
      Eigen::JacobiSVD<Matrix> svd(M, opts);
      out.U = svd.matrixU();
      out.V = svd.matrixV();
      out.S = svd.singularValues();
    }
  }

  for (Index j = 0; j < out.U.cols(); ++j) {
    const Index i = dominant_entry(out.U.col(j));
    if (out.U(i, j) < 0.0) {
      out.U.col(j) *= -1.0;
      out.V.col(j) *= -1.0;
    }
  }
  return out;
}

Index numerical_rank(const ThinSVD& svd, double rel_tol) {
  if (svd.S.size() == 0 || svd.S(0) <= 0.0) return 0;
  const double cut = rel_tol * svd.S(0);
  Index r = 0;
  while (r < svd.S.size() && svd.S(r) > cut) ++r;
  return r;
}

Matrix pinv(const ThinSVD& svd, double rel_tol) {
  const Index r = numerical_rank(svd, rel_tol);
  const Vector inv = svd.S.head(r).cwiseInverse();
  return svd.V.leftCols(r) * inv.asDiagonal() * svd.U.leftCols(r).transpose();
}

Matrix row_space_projector(const ThinSVD& svd, double rel_tol) {
  const Index r = numerical_rank(svd, rel_tol);
  const auto Vr = svd.V.leftCols(r);
  Matrix P = Vr * Vr.transpose();
  // GEMM does not guarantee bitwise symmetry
  P = 0.5 * (P + P.transpose()).eval();
  return P;
}

bool eigenvalue_before(const Complex& a, const Complex& b) {
  const double ma = std::abs(a), mb = std::abs(b);
  if (ma != mb) return ma > mb;
  if (a.imag() != b.imag()) return a.imag() > b.imag();
  return a.real() > b.real();
}

ComplexEigenSet eig_nonsymmetric(const Matrix& M) {
  if (M.rows() != M.cols()) throw DimensionMismatch("eig_nonsymmetric: matrix is not square");
  require_finite(M, "eig_nonsymmetric");

  Eigen::EigenSolver<Matrix> es(M, true);
  if (es.info() != Eigen::Success)
    throw EigFailure("eig_nonsymmetric: real Schur iteration did not converge (n=" +
                     std::to_string(M.rows()) + ")");

  const ComplexVector vals = es.eigenvalues();
  const ComplexMatrix vecs = es.eigenvectors();
  const Index n = M.rows();

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return eigenvalue_before(vals(a), vals(b)); });

  ComplexEigenSet out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Index j = 0; j < n; ++j) {
    const Index src = order[static_cast<std::size_t>(j)];
    out.values(j) = vals(src);
    ComplexVector w = vecs.col(src);
    const double nrm = w.norm();
    if (!(nrm > 0.0)) throw EigFailure("eig_nonsymmetric: zero eigenvector");
    w /= nrm;
    const Index i = dominant_entry(w);
    const Complex phase = std::abs(w(i)) > 0.0 ? std::conj(w(i)) / std::abs(w(i)) : Complex(1.0);
    w *= phase;
    w(i) = Complex(w(i).real(), 0.0);
    out.vectors.col(j) = w;
  }

  const double scale = M.norm();
  const ComplexMatrix Mc = M.cast<Complex>();
  for (Index j = 0; j < n; ++j) {
    const double res = (Mc * out.vectors.col(j) - out.values(j) * out.vectors.col(j)).norm();
    if (res > 1e-8 * scale)
      throw EigFailure("eig_nonsymmetric: eigenpair " + std::to_string(j) +
                       " residual " + std::to_string(res) + " exceeds tolerance");
  }
  return out;
}

}  // namespace lrdmd
