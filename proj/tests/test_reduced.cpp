#include "lrdmd/errors.hpp"
#include "lrdmd/reduced_models.hpp"
#include "lrdmd/solver.hpp"

#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace lrdmd;
using namespace lrdmd::testing;

namespace {

double rel(const Matrix& a, const Matrix& b) { return (a - b).norm() / std::max(b.norm(), 1e-300); }

// A = P Q^T with Q^T P similar to the given r x r matrix.
FactoredOperator operator_with(const Matrix& core, Rng& rng, Index n) {
  const Index r = core.rows();
  Eigen::HouseholderQR<Matrix> qr(rng.normal_matrix(n, r));
  FactoredOperator op;
  op.P = qr.householderQ() * Matrix::Identity(n, r);
  op.Q = op.P * core.transpose();
  op.requested_rank = r;
  return op;
}

}  // namespace

TEST_CASE("dense, reduced and spectral recursions agree") {
  Rng rng(201);
  for (int c = 0; c < 20; ++c) {
    const Index n = 20 + c, m = 10;
    const SnapshotPair d = random_instance(rng, n, m, c % 3 ? m : 6);
    const Index k = 1 + c % 5;
    const FactoredOperator op = optimal_lowrank(d, k);
    const Vector theta = rng.normal_vector(n);

    const Matrix A = op.dense();
    Matrix dense(n, 11);
    dense.col(0) = theta;
    for (Index t = 1; t < 11; ++t) dense.col(t) = A * dense.col(t - 1);

    const Matrix red = simulate_reduced(build_svd_reduced_model(op), theta, 11);
    const Matrix spec = simulate_spectral(build_spectral_model(op), theta, 11);
    CHECK(rel(red, dense) <= 1e-8);
    CHECK(rel(spec.rightCols(10), dense.rightCols(10)) <= 1e-8);
    CHECK(rel(simulate_operator(op, theta, 11), dense) <= 1e-12);
  }
}

TEST_CASE("reduced model rejects a non-orthonormal decoder") {
  Rng rng(202);
  FactoredOperator op;
  op.P = rng.normal_matrix(8, 2);
  op.Q = rng.normal_matrix(8, 2);
  CHECK_THROWS_AS(build_svd_reduced_model(op), InvalidOperator);
}

TEST_CASE("reduced simulation at T = 1 returns theta") {
  Rng rng(203);
  const SnapshotPair d = random_instance(rng, 12, 6, 6);
  const ReducedModel m = build_svd_reduced_model(optimal_lowrank(d, 3));
  const Vector theta = rng.normal_vector(12);
  const Matrix out = simulate_reduced(m, theta, 1);
  CHECK(out.cols() == 1);
  CHECK(out.col(0) == theta);
  CHECK_THROWS_AS(simulate_reduced(m, Vector::Ones(5), 3), DimensionMismatch);
  CHECK_THROWS_AS(simulate_reduced(m, theta, 0), InvalidInput);
}

TEST_CASE("eigentriples satisfy the eigen relations and biorthonormality") {
  Rng rng(204);
  for (int c = 0; c < 50; ++c) {
    const Index n = 15 + c % 20, m = 12;
    const SnapshotPair d = random_instance(rng, n, m, c % 2 ? m : 7);
    const Index k = 1 + c % 10;
    const FactoredOperator op = optimal_lowrank(d, k);
    const SpectralModel sm = build_spectral_model(op);
    const double an = op.dense().norm();
    const Matrix A = op.dense();
    for (Index i = 0; i < sm.rank(); ++i) {
      const ComplexVector z = sm.right.col(i), x = sm.left.col(i);
      const Complex lam = sm.eigvals(i);
      CHECK((A.cast<Complex>() * z - lam * z).norm() <= 1e-8 * an * z.norm());
      CHECK((A.transpose().cast<Complex>() * x - lam * x).norm() <= 1e-8 * an * x.norm());
      CHECK(std::abs(Complex(x.transpose() * A.cast<Complex>() * z) - lam) <= 1e-8 * std::max(1.0, std::abs(lam)));
      CHECK(std::abs(Complex(x.transpose() * z) - 1.0) <= 1e-8);
    }
    CHECK(right_eigen_residual(op, sm) <= 1e-8);
    CHECK(left_eigen_residual(op, sm) <= 1e-8);
    CHECK(normalization_residual(sm) <= 1e-8);
    CHECK(std::abs(operator_norm_fro(op) - an) <= 1e-10 * an);
  }
}

TEST_CASE("spectral eigenvalues match a dense eigensolver") {
  Rng rng(205);
  for (int c = 0; c < 10; ++c) {
    const Index n = 20 + 3 * c, m = 10;
    const SnapshotPair d = random_instance(rng, n, m, m);
    const Index k = 2 + c % 8;
    const FactoredOperator op = optimal_lowrank(d, k);
    const SpectralModel sm = build_spectral_model(op);
    Eigen::ComplexEigenSolver<ComplexMatrix> dense(op.dense().cast<Complex>());
    std::vector<Complex> nz;
    const double lmax = dense.eigenvalues().cwiseAbs().maxCoeff();
    for (Index i = 0; i < n; ++i)
      if (std::abs(dense.eigenvalues()(i)) > 1e-8 * lmax) nz.push_back(dense.eigenvalues()(i));
    REQUIRE(static_cast<Index>(nz.size()) == sm.rank());
    const std::vector<Complex> got(sm.eigvals.data(), sm.eigvals.data() + sm.rank());
    CHECK(multiset_distance(got, nz) <= 1e-8 * std::max(1.0, lmax));
  }
}

TEST_CASE("repeated eigenvalues are biorthonormalized within their cluster") {
  Rng rng(206);
  Matrix core = Matrix::Zero(4, 4);
  core.diagonal() << 2.0, 2.0, 2.0, -1.0;
  Eigen::HouseholderQR<Matrix> qr(rng.normal_matrix(4, 4));
  const Matrix S = qr.householderQ();
  const Matrix W = S + 0.3 * rng.normal_matrix(4, 4);  // non-orthogonal similarity
  const FactoredOperator op = operator_with(W * core * W.inverse(), rng, 15);
  const SpectralModel sm = build_spectral_model(op);
  REQUIRE(sm.rank() == 4);
  const ComplexMatrix G = sm.left.transpose() * sm.right;
  CHECK((G - ComplexMatrix::Identity(4, 4)).norm() <= 1e-8);
  CHECK(right_eigen_residual(op, sm) <= 1e-8);
  CHECK(left_eigen_residual(op, sm) <= 1e-8);
}

TEST_CASE("conjugate pairs give a real trajectory") {
  Rng rng(207);
  Matrix core(2, 2);
  core << 0.9, -0.4, 0.4, 0.9;
  const FactoredOperator op = operator_with(core, rng, 10);
  const SpectralModel sm = build_spectral_model(op);
  REQUIRE(sm.rank() == 2);
  CHECK(sm.eigvals(0).imag() > 0.0);
  CHECK(std::abs(sm.eigvals(0) - std::conj(sm.eigvals(1))) < 1e-12);
  SimulationStats stats;
  const Vector theta = rng.normal_vector(10);
  const Matrix x = simulate_spectral(sm, theta, 8, &stats);
  CHECK(stats.max_imag_ratio < 1e-10);
  CHECK(rel(x.rightCols(7), simulate_operator(op, theta, 8).rightCols(7)) < 1e-10);
}

TEST_CASE("a defective operator is flagged or rejected") {
  Rng rng(208);
  Matrix core(2, 2);
  core << 1.0, 1.0, 0.0, 1.0;  // Jordan block
  const FactoredOperator op = operator_with(core, rng, 10);
  bool flagged = false;
  try {
    flagged = build_spectral_model(op).diagonalisability_warning;
  } catch (const PairingFailure&) {
    flagged = true;
  }
  CHECK(flagged);
}

TEST_CASE("zero eigenvalues are dropped from the spectral model") {
  Rng rng(209);
  Matrix core = Matrix::Zero(3, 3);
  core(0, 0) = 1.5;
  core(1, 1) = -0.5;
  const FactoredOperator op = operator_with(core, rng, 12);
  const SpectralModel sm = build_spectral_model(op);
  CHECK(sm.rank() == 2);
}

TEST_CASE("multiply-add counters") {
  Rng rng(210);
  const Index n = 40, r = 5;
  const SnapshotPair d = random_instance(rng, n, 12, 12);
  const FactoredOperator op = optimal_lowrank(d, r);
  const Vector theta = rng.normal_vector(n);
  SimulationStats s;
  simulate_spectral(build_spectral_model(op), theta, 6, &s);
  CHECK(s.setup_madds == static_cast<std::uint64_t>(r * n));
  REQUIRE(s.step_madds.size() == 5);
  for (auto c : s.step_madds) CHECK(c == static_cast<std::uint64_t>(r + r * n));

  simulate_reduced(build_svd_reduced_model(op), theta, 6, &s);
  REQUIRE(s.step_madds.size() == 5);
  CHECK(s.step_madds.front() == static_cast<std::uint64_t>(r * n));
  for (std::size_t i = 1; i < s.step_madds.size(); ++i)
    CHECK(s.step_madds[i] == static_cast<std::uint64_t>(r * r + r * n));
}

TEST_CASE("exact-rank data: reduced trajectory reproduces the true one") {
  Rng rng(211);
  const Index n = 30, r = 3;
  const Matrix F = rng.normal_matrix(n, r) * rng.normal_matrix(r, n) / 12.0;
  std::vector<Matrix> trajs;
  for (int i = 0; i < 5; ++i) {
    Matrix t(n, 11);
    t.col(0) = rng.normal_vector(n);
    for (Index j = 1; j < 11; ++j) t.col(j) = F * t.col(j - 1);
    trajs.push_back(t);
  }
  const SnapshotPair d = SnapshotPair::from_trajectories(trajs);
  const FactoredOperator op = optimal_lowrank(d, r);
  const Matrix sim = simulate_reduced(build_svd_reduced_model(op), trajs[2].col(0), 11);
  CHECK(rel(sim, trajs[2]) <= 1e-8);
}
