#include "lrdmd/sweep.hpp"
#include "lrdmd/errors.hpp"

#include <cmath>
#include <limits>

namespace lrdmd {

const SweepCell& ErrorCurve::at(Method m, Index k) const {
  for (const auto& c : cells)
    if (c.method == m && c.k == k) return c;
  throw InvalidInput("no sweep cell for method " + to_string(m) + " and k = " + std::to_string(k));
}

std::vector<double> ErrorCurve::column(Method m) const {
  std::vector<double> out;
  for (Index k : ks) {
    const SweepCell& c = at(m, k);
    out.push_back(c.ok ? c.normalized : std::numeric_limits<double>::quiet_NaN());
  }
  return out;
}

std::string describe_flags(const SolveFlags& f) {
  std::string s;
  auto add = [&](const char* w) {
    if (!s.empty()) s += ';';
    s += w;
  };
  if (f.zero_data) add("zero_data");
  if (f.rank_deficient_x) add("rank_deficient_x");
  if (f.rank_reduced) add("rank_reduced");
  return s;
}

ErrorCurve error_sweep(const SnapshotPair& data, const std::vector<Index>& ks,
                       const std::vector<Method>& methods, const SolverOptions& opts) {
  for (Index k : ks)
    if (k < 1 || k > data.m())
      throw InvalidRank("sweep rank " + std::to_string(k) + " outside [1, " + std::to_string(data.m()) + "]");

  ErrorCurve curve;
  curve.ks = ks;
  curve.methods = methods;
  const double ny = data.Y().norm();
  const double scale = ny > 0.0 ? ny : 1.0;

  for (Method m : methods) {
    for (Index k : ks) {
      SweepCell cell;
      cell.k = k;
      cell.method = m;
      try {
        const FactoredOperator op = solve(m, data, k, opts);
        const double err = direct_error(op, data);
        cell.normalized = err / scale;
        cell.effective_rank = op.rank();
        if (m == Method::optimal) {
          const double cf = optimal_error_closed_form(data, k, opts);
          cell.closed_form = cf / scale;
          cell.closed_form_gap = std::abs(err - cf) / scale;
        }
        cell.flags = describe_flags(op.flags);
        cell.ok = true;
      } catch (const std::exception& e) {
        cell.ok = false;
        cell.flags = std::string("error:") + e.what();
      }
      curve.cells.push_back(std::move(cell));
    }
  }
  return curve;
}

}  // namespace lrdmd
