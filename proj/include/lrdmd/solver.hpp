#ifndef LRDMD_SOLVER_HPP
#define LRDMD_SOLVER_HPP

#include "lrdmd/linalg.hpp"
#include "lrdmd/snapshots.hpp"

#include <optional>
#include <string>

namespace lrdmd {

struct SolverOptions {
  double rank_tol = default_rank_tol;
};

// Diagnostics attached to a solver result.
struct SolveFlags {
  bool zero_data = false;         // X is numerically zero, result is the zero operator
  bool rank_deficient_x = false;  // rank(X) < m
  bool rank_reduced = false;      // fewer than the requested k directions were available
};

// A = P Q^T with P, Q of shape n x r. r may be 0 for the zero operator.
struct FactoredOperator {
  Matrix P;
  Matrix Q;
  Index requested_rank = 0;
  SolveFlags flags;

  Index dim() const { return P.rows(); }
  Index rank() const { return P.cols(); }

  Vector apply(const Eigen::Ref<const Vector>& x) const;
  // A M for an n x c block.
  Matrix apply_block(const Matrix& M) const;
  // Dense n x n form. Test and diagnostics use only.
  Matrix dense() const;
};

// Computes P (Q^T x); O(rn).
Vector apply_operator(const FactoredOperator& op, const Eigen::Ref<const Vector>& x);

struct ErrorReport {
  double direct_error = 0.0;                // ||Y - P Q^T X||_F
  std::optional<double> closed_form_error;  // optimal method only
  double normalized = 0.0;                  // direct_error / ||Y||_F
};

FactoredOperator unconstrained_solution(const SnapshotPair& data, const SolverOptions& opts = {});

// Z = Y P_{X^T}.
Matrix compute_Z(const SnapshotPair& data, const SolverOptions& opts = {});

FactoredOperator optimal_lowrank(const SnapshotPair& data, Index k, const SolverOptions& opts = {});

// Square root of  sum_{i>k} sigma_{Z,i}^2 + ||Y (I - P_{X^T})||_F^2.
double optimal_error_closed_form(const SnapshotPair& data, Index k, const SolverOptions& opts = {});

// ||Y (I - P_{X^T})||_F, the part of Y no operator can reach.
double row_space_residual(const SnapshotPair& data, const SolverOptions& opts = {});

// Same quantity from the singular triplets of X and Y:
//   sum_{i > rank X} sum_j sigma_{Y,j}^2 ((v_X^i)^T v_Y^j)^2.
// Needs a square V_X, i.e. m <= n; nullopt otherwise.
std::optional<double> row_space_residual_spectral(const SnapshotPair& data,
                                                  const SolverOptions& opts = {});

FactoredOperator truncated_baseline(const SnapshotPair& data, Index k, const SolverOptions& opts = {});

FactoredOperator projected_dmd_baseline(const SnapshotPair& data, Index k,
                                        const SolverOptions& opts = {});

// ||X Y^T P - X X^T Q||_F / ||X Y^T P||_F.
double first_order_residual(const FactoredOperator& op, const SnapshotPair& data);

double direct_error(const FactoredOperator& op, const SnapshotPair& data);

ErrorReport evaluate(const FactoredOperator& op, const SnapshotPair& data,
                     std::optional<double> closed_form = std::nullopt);

enum class Method { optimal, truncated, projected };

std::string to_string(Method m);
Method parse_method(const std::string& name);

FactoredOperator solve(Method method, const SnapshotPair& data, Index k,
                       const SolverOptions& opts = {});

}  // namespace lrdmd

#endif
