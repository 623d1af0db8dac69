#ifndef LRDMD_RB_HPP
#define LRDMD_RB_HPP

#include "lrdmd/eigen.hpp"

#include <array>
#include <cstdint>
#include <string>

namespace lrdmd {

// Two-dimensional Boussinesq convection in the unit cell
//   b_t   + v.grad b   - sigma lap b - sigma nu d1 tau = 0
//   tau_t + v.grad tau - lap tau     - d1 lap^{-1} b   = 0,   v = perp-grad lap^{-1} b
//
// Periodic in s1. In s2 both fields are extended oddly to a period-2 cell,
// which keeps sin(pi s2) profiles smooth and is preserved by the equations.
// Nodes: s1 = i/n1, s2 = (j + 1/2)/n2.
struct RBGrid {
  Index n1 = 16;
  Index n2 = 32;

  Index points() const { return n1 * n2; }
  Index state_size() const { return 2 * n1 * n2; }
  double s1(Index i) const { return static_cast<double>(i) / static_cast<double>(n1); }
  double s2(Index j) const { return (static_cast<double>(j) + 0.5) / static_cast<double>(n2); }
};

struct RBConfig {
  double prandtl = 1.0;   // sigma
  double rayleigh = 0.0;  // nu
  RBGrid grid;
  double dt = 1e-3;
  Index sample_stride = 100;
  std::uint64_t seed = 0;
};

// Number of extra temperature modes carried by an initial condition.
inline constexpr int rb_perturbation_modes = 6;

// b(s,0)   = kappa_b sin(a_b s1) sin(pi s2)
// tau(s,0) = kappa_t1 cos(a_t s1) sin(pi s2) - kappa_t2 sin(2 pi s2) + sum_j eps_j phi_j(s)
// where phi_j are fixed smooth modes (see rb_perturbation_mode).
struct InitCondition {
  double a_b = 0.0;
  double a_tau = 0.0;
  double kappa_b = 0.0;
  double kappa_tau1 = 0.0;
  double kappa_tau2 = 0.0;
  std::array<double, rb_perturbation_modes> perturbation{};
};

// phi_j evaluated at a node; j in [0, rb_perturbation_modes).
double rb_perturbation_mode(int j, double s1, double s2);

// Stacked (b; tau) values, each field row-major over (s1 index, s2 index).
Vector lorenz_init(const InitCondition& ic, const RBGrid& grid);

// Samples of the full nonlinear system: column 0 is the initial state, column j
// the state after j * sample_stride steps. Throws SimulationBlowup.
Matrix simulate_rb(const RBConfig& cfg, const InitCondition& ic, Index samples);

// Linear regime: b diffuses in closed form (exp(sigma lap t) applied to its
// initial field, the Taylor vortex for single-mode data) and tau follows the
// advection-diffusion equation forced by that b. rayleigh is ignored.
Matrix simulate_rb_linear(const RBConfig& cfg, const InitCondition& ic, Index samples);

// Analytic Taylor-vortex buoyancy at physical time t.
Vector taylor_vortex_buoyancy(const RBConfig& cfg, const InitCondition& ic, double t);

// kappa_b for which the nonlinear and linear systems coincide when nu = 0.
double taylor_vortex_amplitude(double prandtl, double a_b);

std::string rb_scheme_description();

}  // namespace lrdmd

#endif
