#include "lrdmd/reduced_models.hpp"
#include "lrdmd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace lrdmd {

ReducedModel build_svd_reduced_model(const FactoredOperator& op) {
  const Index r = op.rank();
  if (op.Q.rows() != op.P.rows() || op.Q.cols() != r)
    throw InvalidOperator("factors P and Q differ in shape");
  if (r > 0) {
    const double dev = (op.P.transpose() * op.P - Matrix::Identity(r, r)).norm();
    if (dev > 1e-8)
      throw InvalidOperator("P does not have orthonormal columns (||P^T P - I|| = " +
                            std::to_string(dev) + ")");
  }
  ReducedModel model;
  model.L = op.Q;
  model.R = op.P;
  model.S = op.Q.transpose() * op.P;
  return model;
}

SpectralModel build_spectral_model(const FactoredOperator& op, const SpectralOptions& opts) {
  const Index n = op.dim();
  const Index k = op.rank();
  SpectralModel model;
  model.eigvals.resize(0);
  model.right.resize(n, 0);
  model.left.resize(n, 0);
  if (k == 0) return model;

  const Matrix Mr = op.Q.transpose() * op.P;
  const ComplexEigenSet er = eig_nonsymmetric(Mr);

  const double lmax = std::abs(er.values(0));
  if (!(lmax > 0.0)) return model;
  Index r = 0;
  while (r < k && std::abs(er.values(r)) > opts.zero_tol * lmax) ++r;

  // group numerically equal eigenvalues
  std::vector<Index> group(static_cast<std::size_t>(r));
  std::iota(group.begin(), group.end(), Index{0});
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < i; ++j)
      if (std::abs(er.values(i) - er.values(j)) <= opts.cluster_tol * lmax) {
        group[static_cast<std::size_t>(i)] = group[static_cast<std::size_t>(j)];
        break;
      }

  const ComplexMatrix Pc = op.P.cast<Complex>();
  const ComplexMatrix Mrc = Mr.cast<Complex>();
  // A^T = U R P^T with Q = U R, so left eigenvectors are U y with R P^T U y = lambda y.
  Eigen::HouseholderQR<Matrix> qq(op.Q);
  const Matrix U = qq.householderQ() * Matrix::Identity(n, k);
  const Matrix Rq = qq.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  const ComplexMatrix Uc = U.cast<Complex>();
  const ComplexMatrix Mlc = (Rq * (op.P.transpose() * U)).cast<Complex>();
  model.eigvals = er.values.head(r);
  model.right.resize(n, r);
  model.left.resize(n, r);

  std::vector<bool> done(static_cast<std::size_t>(r), false);
  for (Index i = 0; i < r; ++i) {
    if (done[static_cast<std::size_t>(i)]) continue;
    std::vector<Index> members;
    for (Index j = i; j < r; ++j)
      if (group[static_cast<std::size_t>(j)] == group[static_cast<std::size_t>(i)]) members.push_back(j);
    const auto c = static_cast<Index>(members.size());

    // Left eigenvectors are taken at the right eigenvalue itself: the c weakest
    // right singular vectors of (R P^T U - lambda I). Two independent
    // eigensolves can disagree far beyond roundoff on ill-conditioned spectra.
    Complex mean(0.0);
    for (Index m : members) mean += er.values(m);
    mean /= static_cast<double>(c);
    const ComplexMatrix shifted = Mlc - mean * ComplexMatrix::Identity(k, k);
    Eigen::JacobiSVD<ComplexMatrix> ns(shifted, Eigen::ComputeFullV);
    ComplexMatrix Wl = ns.matrixV().rightCols(c);
    if (c > 1) {
      // Near-equal eigenvalues of a non-normal matrix: the weak singular
      // subspace is only roughly invariant, so refine it by block inverse
      // iteration with a slightly displaced shift.
      const ComplexMatrix B = shifted - Complex(1e-13 * lmax, 1e-13 * lmax) * ComplexMatrix::Identity(k, k);
      const Eigen::PartialPivLU<ComplexMatrix> lu(B);
      for (int it = 0; it < 3; ++it) {
        const ComplexMatrix next = lu.solve(Wl);
        if (!next.allFinite()) break;
        Eigen::HouseholderQR<ComplexMatrix> qr(next);
        Wl = qr.householderQ() * ComplexMatrix::Identity(k, c);
      }
    }

    ComplexMatrix Zc(n, c), Xc(n, c);
    for (Index a = 0; a < c; ++a) {
      const Index col = members[static_cast<std::size_t>(a)];
      const Complex lam = er.values(col);
      // zeta = lambda^{-1} P Q^T P w_r,  xi = U y
      ComplexVector zeta = Pc * (Mrc * er.vectors.col(col)) / lam;
      ComplexVector xi = Uc * Wl.col(a);
      Zc.col(a) = zeta / zeta.norm();
      Xc.col(a) = xi / xi.norm();
    }

    // enforce xi^T zeta = I within the group
    const ComplexMatrix G = Xc.transpose() * Zc;
    Eigen::JacobiSVD<ComplexMatrix> gs(G);
    if (!(gs.singularValues()(c - 1) >= opts.min_overlap))
      throw PairingFailure("left and right eigenvectors for lambda_" + std::to_string(i + 1) +
                           " are orthogonal (|xi^T zeta| = " +
                           std::to_string(gs.singularValues()(c - 1)) + ")");
    // Xc <- Xc G^{-T}, so that Xc^T Zc = I
    const ComplexMatrix Xn = G.partialPivLu().solve(Xc.transpose()).transpose();
    for (Index a = 0; a < c; ++a) {
      const Index col = members[static_cast<std::size_t>(a)];
      model.right.col(col) = Zc.col(a);
      model.left.col(col) = Xn.col(a);
      done[static_cast<std::size_t>(col)] = true;
    }
  }

  Eigen::JacobiSVD<ComplexMatrix> ws(er.vectors.leftCols(r));
  const double smin = ws.singularValues()(r - 1);
  model.eigvec_condition =
      smin > 0.0 ? ws.singularValues()(0) / smin : std::numeric_limits<double>::infinity();
  model.diagonalisability_warning = !(model.eigvec_condition <= opts.condition_limit);
  return model;
}

Matrix simulate_reduced(const ReducedModel& model, const Eigen::Ref<const Vector>& theta, Index T,
                        SimulationStats* stats) {
  const Index n = model.dim();
  const Index r = model.rank();
  if (T < 1) throw InvalidInput("simulate_reduced: T must be at least 1");
  if (theta.size() != n)
    throw DimensionMismatch("simulate_reduced: theta has size " + std::to_string(theta.size()) +
                            ", model dimension is " + std::to_string(n));

  Matrix out(n, T);
  out.col(0) = theta;
  if (stats) *stats = SimulationStats{};
  if (T == 1) return out;

  Vector z = Vector::Zero(r);
  for (Index a = 0; a < r; ++a) {
    double s = 0.0;
    for (Index i = 0; i < n; ++i) s += model.L(i, a) * theta(i);
    z(a) = s;
  }
  if (stats) stats->setup_madds = static_cast<std::uint64_t>(r * n);

  Vector next(r);
  for (Index t = 1; t < T; ++t) {
    std::uint64_t madds = 0;
    if (t > 1) {
      for (Index a = 0; a < r; ++a) {
        double s = 0.0;
        for (Index b = 0; b < r; ++b) s += model.S(a, b) * z(b);
        next(a) = s;
      }
      z.swap(next);
      madds += static_cast<std::uint64_t>(r * r);
    }
    for (Index i = 0; i < n; ++i) out(i, t) = 0.0;
    for (Index a = 0; a < r; ++a) {
      const double za = z(a);
      for (Index i = 0; i < n; ++i) out(i, t) += model.R(i, a) * za;
    }
    madds += static_cast<std::uint64_t>(r * n);
    if (stats) stats->step_madds.push_back(madds);
  }
  return out;
}

Matrix simulate_spectral(const SpectralModel& model, const Eigen::Ref<const Vector>& theta, Index T,
                         SimulationStats* stats) {
  const Index n = model.dim();
  const Index r = model.rank();
  if (T < 1) throw InvalidInput("simulate_spectral: T must be at least 1");
  if (theta.size() != n)
    throw DimensionMismatch("simulate_spectral: theta has size " + std::to_string(theta.size()) +
                            ", model dimension is " + std::to_string(n));
  if (stats) *stats = SimulationStats{};

  // nu_{i,1} = xi_i^T theta
  ComplexVector nu(r);
  for (Index a = 0; a < r; ++a) {
    Complex s = 0.0;
    for (Index i = 0; i < n; ++i) s += model.left(i, a) * theta(i);
    nu(a) = s;
  }
  if (stats) stats->setup_madds = static_cast<std::uint64_t>(r * n);

  Matrix out(n, T);
  ComplexVector x(n);
  for (Index t = 0; t < T; ++t) {
    std::uint64_t madds = 0;
    if (t > 0) {
      for (Index a = 0; a < r; ++a) nu(a) *= model.eigvals(a);
      madds += static_cast<std::uint64_t>(r);
    }
    x.setZero();
    for (Index a = 0; a < r; ++a) {
      const Complex c = nu(a);
      for (Index i = 0; i < n; ++i) x(i) += model.right(i, a) * c;
    }
    madds += static_cast<std::uint64_t>(r * n);
    out.col(t) = x.real();
    if (stats) {
      const double re = out.col(t).norm();
      const double im = x.imag().norm();
      const double ratio = re > 0.0 ? im / re : im;
      stats->max_imag_ratio = std::max(stats->max_imag_ratio, ratio);
      if (t > 0) stats->step_madds.push_back(madds);
    }
  }
  return out;
}

Matrix simulate_operator(const FactoredOperator& op, const Eigen::Ref<const Vector>& theta, Index T) {
  if (T < 1) throw InvalidInput("simulate_operator: T must be at least 1");
  Matrix out(op.dim(), T);
  out.col(0) = theta;
  for (Index t = 1; t < T; ++t) out.col(t) = op.apply(out.col(t - 1));
  return out;
}

double operator_norm_fro(const FactoredOperator& op) {
  if (op.rank() == 0) return 0.0;
  const Matrix PtP = op.P.transpose() * op.P;
  const Matrix QtQ = op.Q.transpose() * op.Q;
  return std::sqrt(std::max(0.0, (PtP.cwiseProduct(QtQ)).sum()));
}

double right_eigen_residual(const FactoredOperator& op, const SpectralModel& model) {
  const double a = operator_norm_fro(op);
  double worst = 0.0;
  const ComplexMatrix Pc = op.P.cast<Complex>();
  const ComplexMatrix Qt = op.Q.transpose().cast<Complex>();
  for (Index i = 0; i < model.rank(); ++i) {
    const ComplexVector Az = Pc * (Qt * model.right.col(i));
    const double res = (Az - model.eigvals(i) * model.right.col(i)).norm() / model.right.col(i).norm();
    worst = std::max(worst, a > 0.0 ? res / a : res);
  }
  return worst;
}

double left_eigen_residual(const FactoredOperator& op, const SpectralModel& model) {
  const double a = operator_norm_fro(op);
  double worst = 0.0;
  const ComplexMatrix Qc = op.Q.cast<Complex>();
  const ComplexMatrix Pt = op.P.transpose().cast<Complex>();
  for (Index i = 0; i < model.rank(); ++i) {
    const ComplexVector Atx = Qc * (Pt * model.left.col(i));
    const double res = (Atx - model.eigvals(i) * model.left.col(i)).norm() / model.left.col(i).norm();
    worst = std::max(worst, a > 0.0 ? res / a : res);
  }
  return worst;
}

double rayleigh_residual(const FactoredOperator& op, const SpectralModel& model) {
  double worst = 0.0;
  const ComplexMatrix Pc = op.P.cast<Complex>();
  const ComplexMatrix Qt = op.Q.transpose().cast<Complex>();
  for (Index i = 0; i < model.rank(); ++i) {
    const ComplexVector Az = Pc * (Qt * model.right.col(i));
    const Complex q = model.left.col(i).transpose() * Az;
    worst = std::max(worst, std::abs(q - model.eigvals(i)));
  }
  return worst;
}

double normalization_residual(const SpectralModel& model) {
  double worst = 0.0;
  for (Index i = 0; i < model.rank(); ++i) {
    const Complex d = model.left.col(i).transpose() * model.right.col(i);
    worst = std::max(worst, std::abs(d - 1.0));
  }
  return worst;
}

double max_eigen_condition(const SpectralModel& model) {
  double worst = 0.0;
  for (Index i = 0; i < model.rank(); ++i) {
    const double d = std::abs(Complex(model.left.col(i).transpose() * model.right.col(i)));
    worst = std::max(worst, model.left.col(i).norm() * model.right.col(i).norm() / d);
  }
  return worst;
}

}  // namespace lrdmd
