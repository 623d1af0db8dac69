// Single entry point for Eigen inside the library.
//
// Every dynamic Eigen allocation is routed through audit::record_dense_allocation
// via the DenseStorage constructor plugin, so tests can assert an upper bound
// on the largest matrix a code path creates.
#ifndef LRDMD_EIGEN_HPP
#define LRDMD_EIGEN_HPP

#include <cstddef>

#if defined(EIGEN_CORE_H) && !defined(LRDMD_EIGEN_AUDIT)
#error "include <lrdmd/eigen.hpp> before any Eigen header"
#endif

namespace lrdmd::audit {

// Called by Eigen with the element count of each dynamic (re)allocation.
void record_dense_allocation(std::ptrdiff_t size) noexcept;

}  // namespace lrdmd::audit

#ifndef LRDMD_EIGEN_AUDIT
#define LRDMD_EIGEN_AUDIT 1
#define EIGEN_DENSE_STORAGE_CTOR_PLUGIN ::lrdmd::audit::record_dense_allocation(size);
#endif

#include <Eigen/Dense>

namespace lrdmd {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

}  // namespace lrdmd

#endif
