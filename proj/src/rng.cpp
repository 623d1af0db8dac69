#include "lrdmd/rng.hpp"

#include <cmath>
#include <numbers>

namespace lrdmd {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (spare_) {
    const double z = *spare_;
    spare_.reset();
    return z;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double rad = std::sqrt(-2.0 * std::log(u1));
  const double ang = 2.0 * std::numbers::pi * u2;
  spare_ = rad * std::sin(ang);
  return rad * std::cos(ang);
}

Matrix Rng::normal_matrix(Index rows, Index cols) {
  Matrix M(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) M(i, j) = normal();
  return M;
}

Vector Rng::normal_vector(Index size) {
  Vector v(size);
  for (Index i = 0; i < size; ++i) v(i) = normal();
  return v;
}

}  // namespace lrdmd
