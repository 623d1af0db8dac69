#ifndef LRDMD_SNAPSHOTS_HPP
#define LRDMD_SNAPSHOTS_HPP

#include "lrdmd/eigen.hpp"

#include <vector>

namespace lrdmd {

// Snapshot matrices X = (x_1 .. x_{T-1}) and Y = (x_2 .. x_T), one block of
// T-1 columns per trajectory.
class SnapshotPair {
 public:
  // Builds X, Y from N trajectories, each stored as an n x T matrix.
  static SnapshotPair from_trajectories(const std::vector<Matrix>& trajectories);

  // Wraps already assembled matrices; N and T must satisfy m = N (T - 1).
  SnapshotPair(Matrix X, Matrix Y, Index trajectories, Index length);

  // Each column pair treated as its own trajectory of length 2.
  SnapshotPair(Matrix X, Matrix Y);

  const Matrix& X() const { return X_; }
  const Matrix& Y() const { return Y_; }
  Index n() const { return X_.rows(); }
  Index m() const { return X_.cols(); }
  Index trajectories() const { return N_; }
  Index length() const { return T_; }

  // Initial state of trajectory i.
  Vector initial_state(Index i) const;
  // Full trajectory i as n x T.
  Matrix trajectory(Index i) const;

 private:
  Matrix X_, Y_;
  Index N_ = 0, T_ = 0;
};

}  // namespace lrdmd

#endif
