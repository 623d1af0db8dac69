#ifndef LRDMD_SWEEP_HPP
#define LRDMD_SWEEP_HPP

#include "lrdmd/solver.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lrdmd {

struct SweepCell {
  Index k = 0;
  Method method = Method::optimal;
  bool ok = false;
  double normalized = 0.0;                   // ||Y - A X||_F / ||Y||_F
  std::optional<double> closed_form;         // normalized, optimal only
  std::optional<double> closed_form_gap;     // |direct - closed form|, normalized
  Index effective_rank = 0;
  std::string flags;                         // ';'-separated, "error:<what>" on failure
};

struct ErrorCurve {
  std::vector<Index> ks;
  std::vector<Method> methods;
  std::vector<SweepCell> cells;  // method-major: all k for methods[0], then methods[1], ...

  const SweepCell& at(Method m, Index k) const;
  // Normalized errors of one method in k order; NaN for failed cells.
  std::vector<double> column(Method m) const;
};

std::string describe_flags(const SolveFlags& f);

// Failures in one cell are recorded in its flags and do not stop the sweep.
ErrorCurve error_sweep(const SnapshotPair& data, const std::vector<Index>& ks,
                       const std::vector<Method>& methods, const SolverOptions& opts = {});

}  // namespace lrdmd

#endif
