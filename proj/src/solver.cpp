#include "lrdmd/solver.hpp"
#include "lrdmd/errors.hpp"

#include <algorithm>
#include <cmath>

namespace lrdmd {
namespace {

void check_rank(Index k, Index m) {
  if (k < 1 || k > m)
    throw InvalidRank("rank k = " + std::to_string(k) + " outside [1, " + std::to_string(m) + "]");
}

FactoredOperator zero_operator(Index n, Index k) {
  FactoredOperator op;
  op.P = Matrix::Zero(n, 0);
  op.Q = Matrix::Zero(n, 0);
  op.requested_rank = k;
  op.flags.zero_data = true;
  op.flags.rank_deficient_x = true;
  op.flags.rank_reduced = true;
  return op;
}

// X^+ applied from the left to the transpose:  (X^+)^T M = U_r S_r^{-1} V_r^T M.
Matrix pinv_transpose_times(const ThinSVD& svd, Index r, const Matrix& M) {
  Matrix t = svd.V.leftCols(r).transpose() * M;
  t = svd.S.head(r).cwiseInverse().asDiagonal() * t;
  return svd.U.leftCols(r) * t;
}

}  // namespace

Vector FactoredOperator::apply(const Eigen::Ref<const Vector>& x) const {
  if (x.size() != P.rows())
    throw DimensionMismatch("operator of dimension " + std::to_string(P.rows()) +
                            " applied to vector of size " + std::to_string(x.size()));
  if (rank() == 0) return Vector::Zero(P.rows());
  const Vector c = Q.transpose() * x;
  return P * c;
}

Matrix FactoredOperator::apply_block(const Matrix& M) const {
  if (M.rows() != P.rows()) throw DimensionMismatch("operator applied to block of wrong height");
  if (rank() == 0) return Matrix::Zero(P.rows(), M.cols());
  const Matrix c = Q.transpose() * M;
  return P * c;
}

Matrix FactoredOperator::dense() const { return P * Q.transpose(); }

Vector apply_operator(const FactoredOperator& op, const Eigen::Ref<const Vector>& x) {
  return op.apply(x);
}

FactoredOperator unconstrained_solution(const SnapshotPair& data, const SolverOptions& opts) {
  const ThinSVD sx = thin_svd(data.X());
  const Index rx = numerical_rank(sx, opts.rank_tol);
  if (rx == 0) return zero_operator(data.n(), data.m());

  const ThinSVD sy = thin_svd(data.Y());
  const Index ry = numerical_rank(sy, opts.rank_tol);

  FactoredOperator op;
  op.requested_rank = data.m();
  op.P = sy.U.leftCols(ry);
  const Matrix VyS = sy.V.leftCols(ry) * sy.S.head(ry).asDiagonal();
  op.Q = pinv_transpose_times(sx, rx, VyS);
  op.flags.rank_deficient_x = rx < data.m();
  return op;
}

Matrix compute_Z(const SnapshotPair& data, const SolverOptions& opts) {
  const ThinSVD sx = thin_svd(data.X());
  const Index r = numerical_rank(sx, opts.rank_tol);
  const auto Vr = sx.V.leftCols(r);
  const Matrix YV = data.Y() * Vr;
  return YV * Vr.transpose();
}

FactoredOperator optimal_lowrank(const SnapshotPair& data, Index k, const SolverOptions& opts) {
  check_rank(k, data.m());
  const ThinSVD sx = thin_svd(data.X());
  const Index rx = numerical_rank(sx, opts.rank_tol);
  if (rx == 0) return zero_operator(data.n(), k);

  const auto Vr = sx.V.leftCols(rx);
  const Matrix Z = (data.Y() * Vr) * Vr.transpose();
  FactoredOperator op;
  op.requested_rank = k;
  op.flags.rank_deficient_x = rx < data.m();
  if (Z.isZero(0.0)) {
    op.P = Matrix::Zero(data.n(), 0);
    op.Q = Matrix::Zero(data.n(), 0);
    op.flags.rank_reduced = true;
    return op;
  }

  // The leading left singular vectors of Z. In exact arithmetic these are the
  // columns of Z V_Z S_Z^+; taking them from the SVD keeps small directions accurate.
  const ThinSVD sz = thin_svd(Z);
  const Index keff = std::min(k, numerical_rank(sz, opts.rank_tol));
  op.flags.rank_reduced = keff < k;
  op.P = sz.U.leftCols(keff);

  // Q = (P^T Y X^+)^T = (X^+)^T Y^T P
  const Matrix YtP = data.Y().transpose() * op.P;
  op.Q = pinv_transpose_times(sx, rx, YtP);
  return op;
}

double row_space_residual(const SnapshotPair& data, const SolverOptions& opts) {
  return (data.Y() - compute_Z(data, opts)).norm();
}

std::optional<double> row_space_residual_spectral(const SnapshotPair& data,
                                                  const SolverOptions& opts) {
  const ThinSVD sx = thin_svd(data.X());
  if (sx.V.cols() != data.m()) return std::nullopt;
  const ThinSVD sy = thin_svd(data.Y());
  const Index istar = numerical_rank(sx, opts.rank_tol);

  double acc = 0.0;
  for (Index i = istar; i < data.m(); ++i) {
    for (Index j = 0; j < sy.S.size(); ++j) {
      const double c = sx.V.col(i).dot(sy.V.col(j));
      acc += sy.S(j) * sy.S(j) * c * c;
    }
  }
  return std::sqrt(acc);
}

double optimal_error_closed_form(const SnapshotPair& data, Index k, const SolverOptions& opts) {
  check_rank(k, data.m());
  const Matrix Z = compute_Z(data, opts);
  const double outside = (data.Y() - Z).squaredNorm();
  if (Z.isZero(0.0)) return std::sqrt(outside);
  const ThinSVD sz = thin_svd(Z);
  double tail = 0.0;
  for (Index i = k; i < sz.S.size(); ++i) tail += sz.S(i) * sz.S(i);
  return std::sqrt(tail + outside);
}

FactoredOperator truncated_baseline(const SnapshotPair& data, Index k, const SolverOptions& opts) {
  check_rank(k, data.m());
  const ThinSVD sx = thin_svd(data.X());
  const Index rx = numerical_rank(sx, opts.rank_tol);
  if (rx == 0) return zero_operator(data.n(), k);

  FactoredOperator op;
  op.requested_rank = k;
  op.flags.rank_deficient_x = rx < data.m();

  // Y X^+ = W U_r^T with W = Y V_r S_r^{-1}
  Matrix W = data.Y() * sx.V.leftCols(rx);
  W = W * sx.S.head(rx).cwiseInverse().asDiagonal();
  if (W.isZero(0.0)) {
    op.P = Matrix::Zero(data.n(), 0);
    op.Q = Matrix::Zero(data.n(), 0);
    op.flags.rank_reduced = true;
    return op;
  }
  const ThinSVD sw = thin_svd(W);
  const Index keff = std::min(k, numerical_rank(sw, opts.rank_tol));
  op.flags.rank_reduced = keff < k;
  op.P = sw.U.leftCols(keff);
  const Matrix VS = sw.V.leftCols(keff) * sw.S.head(keff).asDiagonal();
  op.Q = sx.U.leftCols(rx) * VS;
  return op;
}

FactoredOperator projected_dmd_baseline(const SnapshotPair& data, Index k,
                                        const SolverOptions& opts) {
  check_rank(k, data.m());
  const ThinSVD sx = thin_svd(data.X());
  const Index rx = numerical_rank(sx, opts.rank_tol);
  if (rx == 0) return zero_operator(data.n(), k);

  FactoredOperator op;
  op.requested_rank = k;
  op.flags.rank_deficient_x = rx < data.m();

  const Matrix YV = data.Y() * sx.V;
  const Matrix B = sx.U.transpose() * YV;
  if (B.isZero(0.0)) {
    op.P = Matrix::Zero(data.n(), 0);
    op.Q = Matrix::Zero(data.n(), 0);
    op.flags.rank_reduced = true;
    return op;
  }
  const ThinSVD sb = thin_svd(B);
  const Index keff = std::min(k, numerical_rank(sb, opts.rank_tol));
  op.flags.rank_reduced = keff < k;

  // U_X Btilde S_X^+ U_X^T written as (U_X U_B,k) (U_X S_X^+ V_B,k S_B,k)^T
  Vector sinv = Vector::Zero(sx.S.size());
  sinv.head(rx) = sx.S.head(rx).cwiseInverse();
  op.P = sx.U * sb.U.leftCols(keff);
  const Matrix VS = sb.V.leftCols(keff) * sb.S.head(keff).asDiagonal();
  op.Q = sx.U * (sinv.asDiagonal() * VS);
  return op;
}

double first_order_residual(const FactoredOperator& op, const SnapshotPair& data) {
  if (op.dim() != data.n()) throw DimensionMismatch("operator and data dimensions differ");
  if (op.rank() == 0) return 0.0;
  const Matrix XYtP = data.X() * (data.Y().transpose() * op.P);
  const Matrix XXtQ = data.X() * (data.X().transpose() * op.Q);
  const double num = (XYtP - XXtQ).norm();
  const double den = XYtP.norm();
  return den > 0.0 ? num / den : num;
}

double direct_error(const FactoredOperator& op, const SnapshotPair& data) {
  if (op.dim() != data.n()) throw DimensionMismatch("operator and data dimensions differ");
  return (data.Y() - op.apply_block(data.X())).norm();
}

ErrorReport evaluate(const FactoredOperator& op, const SnapshotPair& data,
                     std::optional<double> closed_form) {
  ErrorReport rep;
  rep.direct_error = direct_error(op, data);
  rep.closed_form_error = closed_form;
  const double ny = data.Y().norm();
  rep.normalized = ny > 0.0 ? rep.direct_error / ny : rep.direct_error;
  return rep;
}

std::string to_string(Method m) {
  switch (m) {
    case Method::optimal: return "optimal";
    case Method::truncated: return "truncated";
    case Method::projected: return "projected";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  if (name == "optimal") return Method::optimal;
  if (name == "truncated") return Method::truncated;
  if (name == "projected") return Method::projected;
  throw InvalidInput("unknown method '" + name + "' (expected optimal, truncated or projected)");
}

FactoredOperator solve(Method method, const SnapshotPair& data, Index k, const SolverOptions& opts) {
  switch (method) {
    case Method::optimal: return optimal_lowrank(data, k, opts);
    case Method::truncated: return truncated_baseline(data, k, opts);
    case Method::projected: return projected_dmd_baseline(data, k, opts);
  }
  throw InvalidInput("unknown method");
}

}  // namespace lrdmd
