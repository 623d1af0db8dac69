#ifndef LRDMD_REDUCED_MODELS_HPP
#define LRDMD_REDUCED_MODELS_HPP

#include "lrdmd/solver.hpp"

#include <cstdint>
#include <vector>

namespace lrdmd {

// r-dimensional recursion for A = P Q^T:
//   x_1 = theta,  z_2 = L^T theta,  z_t = S z_{t-1},  x_t = R z_t  (t >= 2)
// with encoder L = Q, decoder R = P and propagator S = Q^T P, all n x r / r x r.
// Then x_t = P (Q^T P)^{t-2} Q^T theta = A^{t-1} theta.
struct ReducedModel {
  Matrix L;
  Matrix R;
  Matrix S;

  Index dim() const { return R.rows(); }
  Index rank() const { return S.rows(); }
};

// Eigentriples (zeta_i, xi_i, lambda_i) of A restricted to its non-zero spectrum,
// normalized so that xi_i^T zeta_i = 1.
struct SpectralModel {
  ComplexVector eigvals;
  ComplexMatrix right;  // n x r, zeta_i
  ComplexMatrix left;   // n x r, xi_i
  bool diagonalisability_warning = false;
  double eigvec_condition = 1.0;

  Index dim() const { return right.rows(); }
  Index rank() const { return eigvals.size(); }
};

struct SpectralOptions {
  double zero_tol = 1e-10;        // |lambda| <= zero_tol * max|lambda| is dropped
  double cluster_tol = 1e-6;      // eigenvalues closer than this are biorthogonalized jointly
  double min_overlap = 1e-12;     // |xi^T zeta| below this is a pairing failure
  double condition_limit = 1e8;   // eigenvector conditioning that triggers the warning
};

// Multiply-add counts gathered while simulating.
struct SimulationStats {
  std::uint64_t setup_madds = 0;
  std::vector<std::uint64_t> step_madds;  // one entry per produced state after the first
  double max_imag_ratio = 0.0;            // spectral path only
};

ReducedModel build_svd_reduced_model(const FactoredOperator& op);

SpectralModel build_spectral_model(const FactoredOperator& op, const SpectralOptions& opts = {});

// States as columns of an n x T matrix.
Matrix simulate_reduced(const ReducedModel& model, const Eigen::Ref<const Vector>& theta, Index T,
                        SimulationStats* stats = nullptr);

// x_t = Re sum_i zeta_i lambda_i^{t-1} xi_i^T theta. At t = 1 this is the
// projection of theta on the model's invariant subspace, not theta itself.
Matrix simulate_spectral(const SpectralModel& model, const Eigen::Ref<const Vector>& theta, Index T,
                         SimulationStats* stats = nullptr);

// Repeated application of the factored operator, x_1 = theta.
Matrix simulate_operator(const FactoredOperator& op, const Eigen::Ref<const Vector>& theta, Index T);

// max_i ||A zeta_i - lambda_i zeta_i|| / ||A||_F evaluated through the factors.
double right_eigen_residual(const FactoredOperator& op, const SpectralModel& model);
double left_eigen_residual(const FactoredOperator& op, const SpectralModel& model);
// max_i |xi_i^T A zeta_i - lambda_i|.
double rayleigh_residual(const FactoredOperator& op, const SpectralModel& model);
// max_i |xi_i^T zeta_i - 1|.
double normalization_residual(const SpectralModel& model);
// max_i ||xi_i|| ||zeta_i|| / |xi_i^T zeta_i|, the eigenvalue condition number.
double max_eigen_condition(const SpectralModel& model);

// ||P Q^T||_F from the r x r Gram matrices.
double operator_norm_fro(const FactoredOperator& op);

}  // namespace lrdmd

#endif
