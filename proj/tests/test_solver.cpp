#include "lrdmd/errors.hpp"
#include "lrdmd/solver.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace lrdmd;
using namespace lrdmd::testing;

TEST_CASE("optimal operator matches the Gram-matrix oracle") {
  Rng rng(101);
  for (Index rank_x : {12, 5}) {
    const SnapshotPair d = random_instance(rng, 30, 12, rank_x);
    for (Index k : {1, 3, 5}) {
      const FactoredOperator op = optimal_lowrank(d, k);
      const Matrix A = oracle_optimal_gram(d, k);
      CHECK(op.rank() == k);
      CHECK((op.dense() - A).norm() <= 1e-8 * A.norm());
      CHECK(std::abs(direct_error(op, d) - dense_error(A, d)) <= 1e-9 * d.Y().norm());
    }
  }
}

TEST_CASE("P-hat has orthonormal columns") {
  Rng rng(102);
  const SnapshotPair d = random_instance(rng, 40, 15, 15);
  const FactoredOperator op = optimal_lowrank(d, 7);
  CHECK((op.P.transpose() * op.P - Matrix::Identity(7, 7)).norm() < 1e-12);
}

TEST_CASE("closed-form error agrees with the direct error and the oracle") {
  Rng rng(103);
  for (int rep = 0; rep < 10; ++rep) {
    const Index n = 10 + 7 * rep, m = 4 + 3 * rep;
    const SnapshotPair d = random_instance(rng, n, m, rep % 2 ? m : std::max<Index>(1, m / 2));
    for (Index k = 1; k <= m; ++k) {
      const double cf = optimal_error_closed_form(d, k);
      const double de = direct_error(optimal_lowrank(d, k), d);
      CHECK(std::abs(de * de - cf * cf) <= 1e-7 * std::max(1.0, cf * cf));
      CHECK(std::abs(cf * cf - oracle_closed_form_sq(d, k)) <= 1e-8 * std::max(1.0, cf * cf));
    }
  }
}

TEST_CASE("error is non-increasing in k") {
  Rng rng(104);
  const SnapshotPair d = random_instance(rng, 25, 20, 9);
  double prev = std::numeric_limits<double>::infinity();
  for (Index k = 1; k <= 20; ++k) {
    const double e = direct_error(optimal_lowrank(d, k), d);
    CHECK(e <= prev + 1e-10);
    prev = e;
  }
}

TEST_CASE("optimal dominates both baselines and random rank-k candidates") {
  Rng rng(105);
  for (int rep = 0; rep < 5; ++rep) {
    const SnapshotPair d = random_instance(rng, 12 + rep, 8, rep % 2 ? 8 : 5);
    for (Index k = 1; k <= 8; ++k) {
      const double opt = direct_error(optimal_lowrank(d, k), d);
      CHECK(opt <= direct_error(truncated_baseline(d, k), d) + 1e-10);
      CHECK(opt <= direct_error(projected_dmd_baseline(d, k), d) + 1e-10);
      for (int c = 0; c < 50; ++c) {
        const Matrix A = rng.normal_matrix(d.n(), k) * rng.normal_matrix(k, d.n());
        CHECK(opt <= dense_error(A, d) + 1e-10);
      }
      // perturbing the optimum can only increase the error
      const FactoredOperator op = optimal_lowrank(d, k);
      const Matrix A = op.dense() + 1e-3 * rng.normal_matrix(d.n(), k) * rng.normal_matrix(k, d.n());
      CHECK(opt <= dense_error(oracle_truncate(A, k), d) + 1e-10);
    }
  }
}

TEST_CASE("full-rank X: error reduces to the tail of Y's spectrum") {
  Rng rng(106);
  const SnapshotPair d = random_instance(rng, 30, 10, 10);
  Eigen::BDCSVD<Matrix> sy(d.Y());
  for (Index k = 1; k <= 10; ++k) {
    double tail = 0.0;
    for (Index i = k; i < 10; ++i) tail += sy.singularValues()(i) * sy.singularValues()(i);
    const double cf = optimal_error_closed_form(d, k);
    CHECK(std::abs(cf * cf - tail) <= 1e-10 * std::max(tail, d.Y().squaredNorm() * 1e-6));
  }
  CHECK(row_space_residual(d) <= 1e-12 * d.Y().norm());
  CHECK(direct_error(optimal_lowrank(d, 10), d) <= 1e-9 * d.Y().norm());
}

TEST_CASE("first-order conditions hold at the optimum") {
  Rng rng(107);
  for (Index rank_x : {15, 6}) {
    const SnapshotPair d = random_instance(rng, 40, 15, rank_x);
    for (Index k : {1, 4, 10, 15}) CHECK(first_order_residual(optimal_lowrank(d, k), d) <= 1e-8);
  }
}

TEST_CASE("unconstrained solution is Y X^+") {
  Rng rng(108);
  for (Index rank_x : {9, 4}) {
    const SnapshotPair d = random_instance(rng, 20, 9, rank_x);
    const Matrix A = d.Y() * oracle_pinv(d.X());
    const FactoredOperator op = unconstrained_solution(d);
    CHECK((op.dense() - A).norm() <= 1e-9 * A.norm());
    CHECK(std::abs(direct_error(op, d) - row_space_residual(d)) <= 1e-9 * d.Y().norm());
  }
}

TEST_CASE("truncated baseline matches the dense truncation of Y X^+") {
  Rng rng(109);
  const SnapshotPair d = random_instance(rng, 25, 10, 7);
  for (Index k : {1, 3, 7}) {
    const Matrix A = oracle_truncated(d, k);
    const FactoredOperator op = truncated_baseline(d, k);
    CHECK(op.flags.rank_deficient_x);
    CHECK((op.dense() - A).norm() <= 1e-8 * A.norm());
  }
}

TEST_CASE("projected baseline matches the dense companion construction") {
  Rng rng(110);
  for (Index rank_x : {10, 6}) {
    const SnapshotPair d = random_instance(rng, 25, 10, rank_x);
    for (Index k : {1, 4, 8}) {
      const Matrix A = oracle_projected(d, k);
      const FactoredOperator op = projected_dmd_baseline(d, k);
      CHECK(op.flags.rank_deficient_x == (rank_x < 10));
      CHECK((op.dense() - A).norm() <= 1e-8 * A.norm());
    }
  }
}

TEST_CASE("two expressions of the unreachable error term agree") {
  Rng rng(111);
  const SnapshotPair d = random_instance(rng, 30, 12, 5);
  const auto spectral = row_space_residual_spectral(d);
  REQUIRE(spectral.has_value());
  CHECK(std::abs(*spectral - row_space_residual(d)) <= 1e-9 * d.Y().norm());
  const SnapshotPair wide = random_instance(rng, 6, 12, 6);
  CHECK_FALSE(row_space_residual_spectral(wide).has_value());
}

TEST_CASE("errors are invariant under an orthogonal change of state coordinates") {
  Rng rng(112);
  const SnapshotPair d = random_instance(rng, 15, 8, 8);
  Eigen::HouseholderQR<Matrix> qr(rng.normal_matrix(15, 15));
  const Matrix U = qr.householderQ();
  const SnapshotPair r(U * d.X(), U * d.Y());
  for (Index k : {2, 5}) {
    CHECK(std::abs(optimal_error_closed_form(d, k) - optimal_error_closed_form(r, k)) < 1e-10);
    CHECK(std::abs(direct_error(optimal_lowrank(d, k), d) - direct_error(optimal_lowrank(r, k), r)) < 1e-10);
  }
}

TEST_CASE("scaling Y scales the error") {
  Rng rng(113);
  const SnapshotPair d = random_instance(rng, 15, 8, 8);
  const SnapshotPair s(d.X(), 3.0 * d.Y());
  CHECK(std::abs(3.0 * optimal_error_closed_form(d, 3) - optimal_error_closed_form(s, 3)) < 1e-10);
}

TEST_CASE("rank requests outside [1, m] are rejected") {
  Rng rng(114);
  const SnapshotPair d = random_instance(rng, 10, 5, 5);
  for (Method m : {Method::optimal, Method::truncated, Method::projected}) {
    CHECK_THROWS_AS(solve(m, d, 0, {}), InvalidRank);
    CHECK_THROWS_AS(solve(m, d, 6, {}), InvalidRank);
  }
  CHECK_THROWS_AS(optimal_error_closed_form(d, 0), InvalidRank);
}

TEST_CASE("malformed data is rejected") {
  Matrix X = Matrix::Ones(4, 3), Y = Matrix::Ones(4, 2);
  CHECK_THROWS_AS(SnapshotPair(X, Y), DimensionMismatch);
  Y = Matrix::Ones(4, 3);
  Y(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(SnapshotPair(X, Y), InvalidInput);
  CHECK_THROWS_AS(SnapshotPair(Matrix(0, 0), Matrix(0, 0)), InvalidInput);
}

TEST_CASE("zero X gives the zero operator with a flag") {
  const SnapshotPair d(Matrix::Zero(6, 3), Matrix::Ones(6, 3));
  const FactoredOperator op = optimal_lowrank(d, 2);
  CHECK(op.rank() == 0);
  CHECK(op.flags.zero_data);
  CHECK(direct_error(op, d) == doctest::Approx(d.Y().norm()));
  CHECK(optimal_error_closed_form(d, 2) == doctest::Approx(d.Y().norm()));
}

TEST_CASE("rank is reduced when Z has fewer than k directions") {
  Rng rng(115);
  // Y = F X with rank(F) = 2
  const Matrix X = rng.normal_matrix(12, 6);
  const Matrix F = rng.normal_matrix(12, 2) * rng.normal_matrix(2, 12);
  const SnapshotPair d(X, F * X);
  const FactoredOperator op = optimal_lowrank(d, 5);
  CHECK(op.rank() == 2);
  CHECK(op.flags.rank_reduced);
  CHECK(direct_error(op, d) <= 1e-10 * d.Y().norm());
}

TEST_CASE("exact low-rank linear data is recovered") {
  Rng rng(116);
  // X has full row rank, so the data pin down F completely
  const Matrix F = rng.normal_matrix(10, 3) * rng.normal_matrix(3, 10) / 10.0;
  const Matrix X = rng.normal_matrix(10, 20);
  const SnapshotPair d(X, F * X);
  const FactoredOperator op = optimal_lowrank(d, 3);
  CHECK((op.dense() - F).norm() <= 1e-10 * F.norm());
}

TEST_CASE("method names round-trip") {
  for (Method m : {Method::optimal, Method::truncated, Method::projected}) CHECK(parse_method(to_string(m)) == m);
  CHECK_THROWS_AS(parse_method("svd"), InvalidInput);
}

TEST_CASE("operator application checks dimensions") {
  Rng rng(117);
  const SnapshotPair d = random_instance(rng, 10, 5, 5);
  const FactoredOperator op = optimal_lowrank(d, 2);
  CHECK_THROWS_AS(op.apply(Vector::Ones(9)), DimensionMismatch);
  const Vector x = Vector::Ones(10);
  CHECK((apply_operator(op, x) - op.dense() * x).norm() < 1e-12 * (op.dense() * x).norm());
}
