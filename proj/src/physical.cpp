#include "lrdmd/physical.hpp"
#include "lrdmd/errors.hpp"
#include "lrdmd/rng.hpp"
#include "lrdmd/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace lrdmd {

std::string to_string(PhysicalSetting s) {
  switch (s) {
    case PhysicalSetting::iv: return "iv";
    case PhysicalSetting::v: return "v";
    case PhysicalSetting::vi: return "vi";
  }
  return "?";
}

PhysicalSetting parse_physical_setting(const std::string& s) {
  if (s == "iv") return PhysicalSetting::iv;
  if (s == "v") return PhysicalSetting::v;
  if (s == "vi") return PhysicalSetting::vi;
  throw InvalidInput("unknown physical setting '" + s + "'");
}

PhysicalPreset physical_preset(PhysicalSetting s) {
  PhysicalPreset p;
  p.setting = s;
  p.rb.grid = RBGrid{16, 32};
  p.rb.dt = 1e-3;
  switch (s) {
    case PhysicalSetting::iv:
      p.rb.prandtl = 1.0;
      p.rb.rayleigh = 0.0;
      p.rb.sample_stride = 10;
      p.trajectories = 50;
      p.length = 2;
      p.linear = true;
      break;
    case PhysicalSetting::v:
      p.rb.prandtl = 1.0;
      p.rb.rayleigh = 0.0;
      p.rb.sample_stride = 10;
      p.trajectories = 5;
      p.length = 11;
      p.linear = true;
      break;
    case PhysicalSetting::vi:
      p.rb.prandtl = 1.0;
      p.rb.rayleigh = 5e3;
      p.rb.sample_stride = 100;
      p.amplitude_scale = 1.0;
      p.perturbation_scale = 1e-6;
      p.trajectories = 5;
      p.length = 11;
      p.linear = false;
      break;
  }
  return p;
}

InitCondition physical_initial_condition(const PhysicalPreset& preset, const HypercubePoint& u) {
  using std::numbers::pi;
  InitCondition ic;
  ic.a_tau = 2.0 * pi * (1.0 + std::floor(3.0 * u[0]));
  ic.kappa_tau1 = preset.amplitude_scale * u[1];
  ic.kappa_tau2 = preset.amplitude_scale * u[2];
  if (preset.setting == PhysicalSetting::vi) {
    ic.a_b = ic.a_tau;
    ic.kappa_b = preset.amplitude_scale * u[3];
  } else {
    ic.a_b = 2.0 * pi;
    ic.kappa_b = taylor_vortex_amplitude(preset.rb.prandtl, ic.a_b);
  }
  for (int j = 0; j < rb_perturbation_modes; ++j)
    ic.perturbation[static_cast<std::size_t>(j)] = preset.perturbation_scale * u[static_cast<std::size_t>(4 + j)];
  return ic;
}

PhysicalDataset gen_physical_dataset(const PhysicalPreset& preset, std::uint64_t seed) {
  Rng rng(seed);
  RBConfig cfg = preset.rb;
  cfg.seed = seed;

  std::vector<Matrix> trajectories;
  std::vector<HypercubePoint> samples;
  for (Index i = 0; i < preset.trajectories; ++i) {
    HypercubePoint u;
    for (auto& c : u) c = rng.uniform();
    samples.push_back(u);
    const InitCondition ic = physical_initial_condition(preset, u);
    trajectories.push_back(preset.linear ? simulate_rb_linear(cfg, ic, preset.length)
                                         : simulate_rb(cfg, ic, preset.length));
  }
  return PhysicalDataset{SnapshotPair::from_trajectories(trajectories), std::move(samples), preset};
}

PhysicalDataset gen_physical_dataset(PhysicalSetting setting, std::uint64_t seed) {
  return gen_physical_dataset(physical_preset(setting), seed);
}

SnapshotPair gen_physical(PhysicalSetting setting, std::uint64_t seed) {
  return gen_physical_dataset(setting, seed).data;
}

SnapshotPair gen_spectral_truth(const SpectralModel& base, Index N, Index T, std::uint64_t seed) {
  if (base.rank() < 1) throw InvalidInput("spectral truth needs at least one eigentriple");
  if (N < 1 || T < 2) throw InvalidInput("spectral truth needs N >= 1 and T >= 2");
  if (normalization_residual(base) > 1e-9) throw InvalidInput("eigentriples are not biorthonormal");

  Rng rng(seed);
  const Index n = base.dim();
  const Index r = base.rank();
  std::vector<Matrix> trajectories;
  for (Index i = 0; i < N; ++i) {
    Matrix traj(n, T);
    // theta = Re sum_i c_i zeta_i with standard normal c
    const ComplexVector c = rng.normal_vector(r).cast<Complex>();
    traj.col(0) = (base.right * c).real();
    for (Index t = 1; t < T; ++t) {
      // G x = Re sum_i lambda_i zeta_i (xi_i^T x)
      const ComplexVector p = base.left.transpose() * traj.col(t - 1).cast<Complex>();
      const ComplexVector w = base.eigvals.cwiseProduct(p);
      traj.col(t) = (base.right * w).real();
    }
    trajectories.push_back(std::move(traj));
  }
  return SnapshotPair::from_trajectories(trajectories);
}

SpectralModel spectral_truth_base(std::uint64_t seed) {
  const SnapshotPair vi = gen_physical(PhysicalSetting::vi, seed);
  const FactoredOperator op = optimal_lowrank(vi, 3);
  if (op.rank() != 3) throw InvalidInput("convection data has rank below 3");
  SpectralModel base;
  base.eigvals = ComplexVector(3);
  base.eigvals << 0.95, 0.85, 0.75;
  base.right = op.P.cast<Complex>();
  base.left = base.right;
  return base;
}

double psnr_noise_sigma(const SnapshotPair& data, double psnr_db) {
  const double peak = std::max(data.X().cwiseAbs().maxCoeff(), data.Y().cwiseAbs().maxCoeff());
  if (!(peak > 0.0)) throw InvalidInput("cannot set a noise level relative to all-zero data");
  if (std::isinf(psnr_db) && psnr_db > 0) return 0.0;
  if (!std::isfinite(psnr_db)) throw InvalidInput("psnr must be finite or +inf");
  return peak * std::pow(10.0, -psnr_db / 20.0);
}

SnapshotPair add_noise_psnr(const SnapshotPair& data, double psnr_db, std::uint64_t seed) {
  const double sigma = psnr_noise_sigma(data, psnr_db);
  if (sigma == 0.0) return data;

  const Index N = data.trajectories(), T = data.length(), n = data.n();
  for (Index i = 0; i < N; ++i)
    for (Index t = 1; t + 1 < T; ++t)
      if (data.X().col(i * (T - 1) + t) != data.Y().col(i * (T - 1) + t - 1))
        throw InvalidInput("X and Y disagree on a shared state; data is not a set of trajectories");

  Rng rng(seed);
  std::vector<Matrix> noisy;
  noisy.reserve(static_cast<std::size_t>(N));
  for (Index i = 0; i < N; ++i) {
    Matrix traj = data.trajectory(i);
    for (Index t = 0; t < T; ++t)
      for (Index r = 0; r < n; ++r) traj(r, t) += sigma * rng.normal();
    noisy.push_back(std::move(traj));
  }
  return SnapshotPair::from_trajectories(noisy);
}

}  // namespace lrdmd
