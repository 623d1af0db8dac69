#ifndef LRDMD_RNG_HPP
#define LRDMD_RNG_HPP

#include "lrdmd/eigen.hpp"

#include <cstdint>
#include <optional>
#include <random>

namespace lrdmd {

// Portable generator: the mt19937_64 engine is fully specified by the C++
// standard, and the conversions below are done by hand so results do not
// depend on the standard library's distribution implementations.
class Rng {
 public:
  static constexpr const char* algorithm = "mt19937_64+u53+box-muller";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Standard normal, Box-Muller, pairs consumed in order.
  double normal();
  // Column-major fill.
  Matrix normal_matrix(Index rows, Index cols);
  Vector normal_vector(Index size);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

}  // namespace lrdmd

#endif
