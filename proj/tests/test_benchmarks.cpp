#include "lrdmd/errors.hpp"
#include "lrdmd/physical.hpp"
#include "lrdmd/rng.hpp"
#include "lrdmd/sweep.hpp"
#include "lrdmd/toy.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <set>

using namespace lrdmd;
using namespace lrdmd::testing;

TEST_CASE("uniform and normal draws have the right moments") {
  Rng rng(1);
  const int n = 1000000;
  double su = 0.0, su2 = 0.0, sn = 0.0, sn2 = 0.0, sn4 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    su += u;
    su2 += u * u;
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
    sn4 += z * z * z * z;
  }
  CHECK(su / n == doctest::Approx(0.5).epsilon(0.005));
  CHECK(su2 / n == doctest::Approx(1.0 / 3.0).epsilon(0.005));
  CHECK(std::abs(sn / n) < 0.005);
  CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.005));
  CHECK(sn4 / n == doctest::Approx(3.0).epsilon(0.02));
}

TEST_CASE("the generator is reproducible from its seed") {
  Rng a(42), b(42), c(43);
  const Matrix ma = a.normal_matrix(5, 7);
  CHECK(ma == b.normal_matrix(5, 7));
  CHECK(ma != c.normal_matrix(5, 7));
  // mt19937_64 reference: the 10000th output for the default seed
  std::mt19937_64 e(5489u);
  e.discard(9999);
  CHECK(e() == 9981545732273789042ULL);
}

TEST_CASE("toy generators: dimensions and determinism") {
  for (ToySetting s : {ToySetting::i, ToySetting::ii, ToySetting::iii}) {
    ToyConfig cfg{s, 50, 40, 30, 7};
    const SnapshotPair a = gen_toy(cfg), b = gen_toy(cfg);
    CHECK(a.n() == 50);
    CHECK(a.m() == 40);
    CHECK(a.trajectories() == 40);
    CHECK(a.length() == 2);
    CHECK(a.X() == b.X());
    CHECK(a.Y() == b.Y());
    cfg.seed = 8;
    CHECK(gen_toy(cfg).X() != a.X());
  }
  CHECK_THROWS_AS(gen_toy({ToySetting::ii, 10, 20, 5, 1}), InvalidInput);
  CHECK_THROWS_AS(gen_toy({ToySetting::ii, 50, 40, 41, 1}), InvalidInput);
  CHECK(parse_toy_setting(to_string(ToySetting::iii)) == ToySetting::iii);
}

TEST_CASE("toy i data obey a companion relation inside the span of X") {
  const ToyConfig cfg{ToySetting::i, 50, 40, 30, 3};
  const SnapshotPair d = gen_toy(cfg);
  const Matrix F = toy_driver(cfg);
  const Matrix Xp = oracle_pinv(d.X());
  const Matrix G = d.X() * Xp * F * d.X() * Xp;
  CHECK((d.Y() - G * d.X()).norm() <= 1e-8 * d.Y().norm());
  CHECK((d.Y() - d.X() * (Xp * d.Y())).norm() <= 1e-8 * d.Y().norm());
}

TEST_CASE("toy ii data have rank r and toy iii data are nonlinear") {
  const ToyConfig cfg{ToySetting::ii, 50, 40, 30, 5};
  const SnapshotPair d = gen_toy(cfg);
  const Matrix F = toy_driver(cfg);
  Eigen::BDCSVD<Matrix> sy(d.Y());
  const Vector& s = sy.singularValues();
  CHECK(s(29) > 1e-8 * s(0));
  CHECK(s(30) < 1e-10 * s(0));
  CHECK((d.Y() - F * d.X()).norm() <= 1e-12 * d.Y().norm());

  const SnapshotPair d3 = gen_toy({ToySetting::iii, 50, 40, 30, 5});
  CHECK(d3.X() == d.X());
  CHECK((d3.Y() - F * (d.X() + d.X().array().cube().matrix())).norm() <= 1e-12 * d3.Y().norm());
}

TEST_CASE("noise level follows the PSNR formula") {
  Rng rng(9);
  const SnapshotPair d = random_instance(rng, 8, 6, 6);
  const double peak = std::max(d.X().cwiseAbs().maxCoeff(), d.Y().cwiseAbs().maxCoeff());
  CHECK(psnr_noise_sigma(d, 20.0) == doctest::Approx(0.1 * peak).epsilon(1e-14));
  CHECK(psnr_noise_sigma(d, 40.0) == doctest::Approx(0.01 * peak).epsilon(1e-14));
  CHECK(psnr_noise_sigma(d, std::numeric_limits<double>::infinity()) == 0.0);
  CHECK_THROWS_AS(psnr_noise_sigma(SnapshotPair(Matrix::Zero(3, 2), Matrix::Zero(3, 2)), 20.0), InvalidInput);
}

TEST_CASE("noise is shared by overlapping snapshots and has the requested level") {
  Rng rng(10);
  std::vector<Matrix> trajs;
  for (int i = 0; i < 4; ++i) trajs.push_back(rng.normal_matrix(250, 1001));
  const SnapshotPair d = SnapshotPair::from_trajectories(trajs);
  const SnapshotPair noisy = add_noise_psnr(d, 20.0, 77);
  for (Index i = 0; i < 4; ++i)
    for (Index t = 1; t < 1000; ++t) REQUIRE(noisy.X().col(i * 1000 + t) == noisy.Y().col(i * 1000 + t - 1));

  // 4 x 1001 x 250 ~ 1e6 draws
  double s2 = 0.0;
  Index count = 0;
  for (Index i = 0; i < 4; ++i) {
    const Matrix e = noisy.trajectory(i) - d.trajectory(i);
    s2 += e.squaredNorm();
    count += e.size();
  }
  const double sigma = psnr_noise_sigma(d, 20.0);
  CHECK(std::sqrt(s2 / static_cast<double>(count)) == doctest::Approx(sigma).epsilon(0.01));

  const SnapshotPair same = add_noise_psnr(d, std::numeric_limits<double>::infinity(), 77);
  CHECK(same.X() == d.X());
  CHECK(same.Y() == d.Y());
  CHECK(add_noise_psnr(d, 20.0, 77).X() == noisy.X());
}

TEST_CASE("inconsistent overlaps are rejected by the noise model") {
  Rng rng(11);
  const Matrix X = rng.normal_matrix(5, 4), Y = rng.normal_matrix(5, 4);
  CHECK_THROWS_AS(add_noise_psnr(SnapshotPair(X, Y, 1, 5), 20.0, 1), InvalidInput);
}

TEST_CASE("error sweep layout and monotone optimal curve") {
  Rng rng(12);
  const SnapshotPair d = random_instance(rng, 30, 12, 12);
  std::vector<Index> ks;
  for (Index k = 1; k <= 12; ++k) ks.push_back(k);
  const std::vector<Method> methods{Method::optimal, Method::truncated, Method::projected};
  const ErrorCurve c = error_sweep(d, ks, methods);
  CHECK(c.cells.size() == 36);
  const auto opt = c.column(Method::optimal);
  for (std::size_t i = 1; i < opt.size(); ++i) CHECK(opt[i] <= opt[i - 1] + 1e-12);
  for (Index k : ks) {
    const SweepCell& o = c.at(Method::optimal, k);
    CHECK(o.ok);
    REQUIRE(o.closed_form.has_value());
    CHECK(std::abs(*o.closed_form - o.normalized) <= 1e-8);
    CHECK(o.normalized <= c.at(Method::truncated, k).normalized + 1e-12);
    CHECK(o.normalized <= c.at(Method::projected, k).normalized + 1e-12);
    CHECK_FALSE(c.at(Method::truncated, k).closed_form.has_value());
  }
}

TEST_CASE("sweep ranks outside [1, m] are rejected up front") {
  Rng rng(13);
  const SnapshotPair d = random_instance(rng, 10, 5, 5);
  CHECK_THROWS_AS(error_sweep(d, {2, 6}, {Method::optimal}), InvalidRank);
  CHECK_THROWS_AS(error_sweep(d, {0}, {Method::optimal}), InvalidRank);
  CHECK(error_sweep(d, {5}, {Method::optimal}).at(Method::optimal, 5).ok);
}

TEST_CASE("spectral ground truth is exactly rank 3 with the prescribed eigenvalues") {
  const SpectralModel base = spectral_truth_base(1);
  REQUIRE(base.rank() == 3);
  CHECK(base.dim() == 1024);
  const SnapshotPair d = gen_spectral_truth(base, 5, 11, 1);
  CHECK(d.m() == 50);
  CHECK(d.trajectories() == 5);
  CHECK(d.length() == 11);
  const FactoredOperator op = optimal_lowrank(d, 3);
  CHECK(direct_error(op, d) / d.Y().norm() <= 1e-8);
  const SpectralModel fit = build_spectral_model(op);
  REQUIRE(fit.rank() == 3);
  CHECK(std::abs(fit.eigvals(0) - 0.95) <= 1e-7);
  CHECK(std::abs(fit.eigvals(1) - 0.85) <= 1e-7);
  CHECK(std::abs(fit.eigvals(2) - 0.75) <= 1e-7);
  for (Index i = 0; i < 3; ++i) CHECK(vector_angle(fit.right.col(i), base.right.col(i)) <= 1e-6);
}

TEST_CASE("physical presets") {
  for (PhysicalSetting s : {PhysicalSetting::iv, PhysicalSetting::v, PhysicalSetting::vi}) {
    const PhysicalPreset p = physical_preset(s);
    CHECK(p.rb.grid.state_size() == 1024);
    CHECK(p.trajectories * (p.length - 1) == 50);
    CHECK(parse_physical_setting(to_string(s)) == s);
  }
  CHECK(physical_preset(PhysicalSetting::iv).length == 2);
  CHECK(physical_preset(PhysicalSetting::v).length == 11);
  CHECK_FALSE(physical_preset(PhysicalSetting::vi).linear);
}

TEST_CASE("physical data for setting iv") {
  const PhysicalDataset a = gen_physical_dataset(PhysicalSetting::iv, 2);
  CHECK(a.data.n() == 1024);
  CHECK(a.data.m() == 50);
  CHECK(a.samples.size() == 50);
  for (const auto& u : a.samples)
    for (double x : u) CHECK((x >= 0.0 && x < 1.0));
  CHECK(gen_physical(PhysicalSetting::iv, 2).Y() == a.data.Y());
  std::set<double> distinct;
  for (const auto& u : a.samples) distinct.insert(u[1]);
  CHECK(distinct.size() == 50);
}
