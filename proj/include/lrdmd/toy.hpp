#ifndef LRDMD_TOY_HPP
#define LRDMD_TOY_HPP

#include "lrdmd/snapshots.hpp"

#include <cstdint>
#include <string>

namespace lrdmd {

// Toy dynamics driven by F = sum_{i<=r} phi_i phi_i^T, phi_i ~ N(0, I_n).
//   i   : x -> X A^c x-wise, i.e. Y = X (X^+ F X), so the companion relation holds
//   ii  : x -> F x
//   iii : x -> F (x + x.^3)
// Each of the m columns of X is an independent standard normal state (T = 2).
enum class ToySetting { i, ii, iii };

struct ToyConfig {
  ToySetting setting = ToySetting::ii;
  Index n = 50;
  Index m = 40;
  Index r = 30;
  std::uint64_t seed = 0;
};

std::string to_string(ToySetting s);
ToySetting parse_toy_setting(const std::string& s);

// The low-rank driver F for a configuration (same draws gen_toy uses).
Matrix toy_driver(const ToyConfig& cfg);

SnapshotPair gen_toy(const ToyConfig& cfg);

}  // namespace lrdmd

#endif
