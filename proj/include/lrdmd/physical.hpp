#ifndef LRDMD_PHYSICAL_HPP
#define LRDMD_PHYSICAL_HPP

#include "lrdmd/rb.hpp"
#include "lrdmd/reduced_models.hpp"
#include "lrdmd/snapshots.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace lrdmd {

// iv: 50 trajectories of length 2 of the linear system
// v : 5 trajectories of length 11 of the linear system
// vi: 5 trajectories of length 11 of the nonlinear system
enum class PhysicalSetting { iv, v, vi };

std::string to_string(PhysicalSetting s);
PhysicalSetting parse_physical_setting(const std::string& s);

inline constexpr int hypercube_dim = 10;
using HypercubePoint = std::array<double, hypercube_dim>;

// Everything that defines a physical dataset apart from the seed.
struct PhysicalPreset {
  PhysicalSetting setting = PhysicalSetting::iv;
  RBConfig rb;
  Index trajectories = 0;
  Index length = 0;
  bool linear = true;
  double amplitude_scale = 0.1;     // kappa = amplitude_scale * u
  double perturbation_scale = 1e-7; // eps_j = perturbation_scale * u
};

PhysicalPreset physical_preset(PhysicalSetting s);

// Map of a hypercube point to an initial condition:
//   u0 -> a_tau in 2 pi {1, 2, 3}; u1, u2 -> kappa_tau1, kappa_tau2;
//   u3 -> kappa_b (vi only, iv/v use the Taylor-vortex amplitude with a_b = 2 pi);
//   u4..u9 -> amplitudes of the six perturbation modes.
InitCondition physical_initial_condition(const PhysicalPreset& preset, const HypercubePoint& u);

struct PhysicalDataset {
  SnapshotPair data;
  std::vector<HypercubePoint> samples;
  PhysicalPreset preset;
};

PhysicalDataset gen_physical_dataset(PhysicalSetting setting, std::uint64_t seed);
PhysicalDataset gen_physical_dataset(const PhysicalPreset& preset, std::uint64_t seed);
SnapshotPair gen_physical(PhysicalSetting setting, std::uint64_t seed);

// Exact linear data x_{t+1} = G x_t with G = sum_i lambda_i zeta_i xi_i^T
// (real part taken). Each of the N trajectories of length T starts from
// Re sum_i c_i zeta_i with standard normal c_i.
SnapshotPair gen_spectral_truth(const SpectralModel& base, Index N, Index T, std::uint64_t seed);

// The rank-3 ground truth used for the noise benchmarks. The modes are the
// orthonormal basis P of the optimal rank-3 fit to nonlinear convection data
// (zeta_i = xi_i = p_i) and the eigenvalues are 0.95, 0.85 and 0.75.
SpectralModel spectral_truth_base(std::uint64_t seed);

// Noise level for a target peak-signal-to-noise ratio:
//   sigma = max |x| 10^{-psnr/20}.
double psnr_noise_sigma(const SnapshotPair& data, double psnr_db);

// Adds i.i.d. N(0, sigma^2) noise per stored state, so a state that appears
// in both X and Y receives the same realization. psnr = +inf is a no-op.
SnapshotPair add_noise_psnr(const SnapshotPair& data, double psnr_db, std::uint64_t seed);

}  // namespace lrdmd

#endif
