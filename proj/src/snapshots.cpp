#include "lrdmd/snapshots.hpp"
#include "lrdmd/errors.hpp"
#include "lrdmd/linalg.hpp"

#include <string>

namespace lrdmd {

SnapshotPair::SnapshotPair(Matrix X, Matrix Y, Index trajectories, Index length)
    : X_(std::move(X)), Y_(std::move(Y)), N_(trajectories), T_(length) {
  require_finite(X_, "snapshot X");
  require_finite(Y_, "snapshot Y");
  if (X_.rows() != Y_.rows() || X_.cols() != Y_.cols())
    throw DimensionMismatch("snapshot pair: X is " + std::to_string(X_.rows()) + "x" +
                            std::to_string(X_.cols()) + ", Y is " + std::to_string(Y_.rows()) +
                            "x" + std::to_string(Y_.cols()));
  if (N_ < 1 || T_ < 2 || N_ * (T_ - 1) != X_.cols())
    throw InvalidInput("snapshot pair: m = " + std::to_string(X_.cols()) +
                       " does not equal N(T-1) with N = " + std::to_string(N_) +
                       ", T = " + std::to_string(T_));
}

SnapshotPair::SnapshotPair(Matrix X, Matrix Y) {
  const Index m = X.cols();
  *this = SnapshotPair(std::move(X), std::move(Y), m, 2);
}

SnapshotPair SnapshotPair::from_trajectories(const std::vector<Matrix>& trajectories) {
  if (trajectories.empty()) throw InvalidInput("snapshot pair: no trajectories");
  const Index n = trajectories.front().rows();
  const Index T = trajectories.front().cols();
  if (T < 2) throw InvalidInput("snapshot pair: trajectories need at least 2 states");
  const auto N = static_cast<Index>(trajectories.size());

  Matrix X(n, N * (T - 1)), Y(n, N * (T - 1));
  for (Index i = 0; i < N; ++i) {
    const Matrix& traj = trajectories[static_cast<std::size_t>(i)];
    if (traj.rows() != n || traj.cols() != T)
      throw DimensionMismatch("snapshot pair: trajectories differ in shape");
    X.middleCols(i * (T - 1), T - 1) = traj.leftCols(T - 1);
    Y.middleCols(i * (T - 1), T - 1) = traj.rightCols(T - 1);
  }
  return SnapshotPair(std::move(X), std::move(Y), N, T);
}

Vector SnapshotPair::initial_state(Index i) const {
  if (i < 0 || i >= N_) throw InvalidInput("trajectory index out of range");
  return X_.col(i * (T_ - 1));
}

Matrix SnapshotPair::trajectory(Index i) const {
  if (i < 0 || i >= N_) throw InvalidInput("trajectory index out of range");
  Matrix out(n(), T_);
  out.leftCols(T_ - 1) = X_.middleCols(i * (T_ - 1), T_ - 1);
  out.col(T_ - 1) = Y_.col((i + 1) * (T_ - 1) - 1);
  return out;
}

}  // namespace lrdmd
