#ifndef LRDMD_AUDIT_HPP
#define LRDMD_AUDIT_HPP

#include <cstddef>

namespace lrdmd::audit {

// Records the largest dense Eigen allocation (in elements) made while alive.
// Only one scope should be active at a time.
class AllocationScope {
 public:
  AllocationScope();
  ~AllocationScope();
  AllocationScope(const AllocationScope&) = delete;
  AllocationScope& operator=(const AllocationScope&) = delete;

  std::ptrdiff_t largest() const noexcept;
  std::ptrdiff_t count() const noexcept;
};

}  // namespace lrdmd::audit

#endif
