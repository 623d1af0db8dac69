#include "lrdmd/toy.hpp"
#include "lrdmd/errors.hpp"
#include "lrdmd/linalg.hpp"
#include "lrdmd/rng.hpp"

namespace lrdmd {
namespace {

void validate(const ToyConfig& cfg) {
  if (cfg.r < 1 || cfg.r > cfg.m || cfg.m > cfg.n)
    throw InvalidInput("toy config needs 1 <= r <= m <= n");
}

Matrix draw_driver(Rng& rng, const ToyConfig& cfg) {
  const Matrix Phi = rng.normal_matrix(cfg.n, cfg.r);
  return Phi * Phi.transpose();
}

}  // namespace

std::string to_string(ToySetting s) {
  switch (s) {
    case ToySetting::i: return "i";
    case ToySetting::ii: return "ii";
    case ToySetting::iii: return "iii";
  }
  return "?";
}

ToySetting parse_toy_setting(const std::string& s) {
  if (s == "i") return ToySetting::i;
  if (s == "ii") return ToySetting::ii;
  if (s == "iii") return ToySetting::iii;
  throw InvalidInput("unknown toy setting '" + s + "'");
}

Matrix toy_driver(const ToyConfig& cfg) {
  validate(cfg);
  Rng rng(cfg.seed);
  return draw_driver(rng, cfg);
}

SnapshotPair gen_toy(const ToyConfig& cfg) {
  validate(cfg);
  Rng rng(cfg.seed);
  const Matrix F = draw_driver(rng, cfg);
  Matrix X = rng.normal_matrix(cfg.n, cfg.m);

  Matrix Y;
  switch (cfg.setting) {
    case ToySetting::i: {
      // G = X X^+ F X X^+ maps range(X) into itself; G X = X (X^+ F X)
      const Matrix Xp = pinv(thin_svd(X));
      const Matrix Ac = Xp * (F * X);
      Y = X * Ac;
      break;
    }
    case ToySetting::ii:
      Y = F * X;
      break;
    case ToySetting::iii:
      Y = F * (X + X.cwiseProduct(X).cwiseProduct(X)).eval();
      break;
  }
  return SnapshotPair(std::move(X), std::move(Y), cfg.m, 2);
}

}  // namespace lrdmd
