#include "lrdmd/audit.hpp"
#include "lrdmd/eigen.hpp"

#include <atomic>

namespace lrdmd::audit {
namespace {

std::atomic<bool> enabled{false};
std::atomic<std::ptrdiff_t> largest_seen{0};
std::atomic<std::ptrdiff_t> allocations{0};

}  // namespace

void record_dense_allocation(std::ptrdiff_t size) noexcept {
  if (!enabled.load(std::memory_order_relaxed)) return;
  allocations.fetch_add(1, std::memory_order_relaxed);
  auto cur = largest_seen.load(std::memory_order_relaxed);
  while (size > cur &&
         !largest_seen.compare_exchange_weak(cur, size, std::memory_order_relaxed)) {
  }
}

AllocationScope::AllocationScope() {
  largest_seen.store(0);
  allocations.store(0);
  enabled.store(true);
}

AllocationScope::~AllocationScope() { enabled.store(false); }

std::ptrdiff_t AllocationScope::largest() const noexcept { return largest_seen.load(); }

std::ptrdiff_t AllocationScope::count() const noexcept { return allocations.load(); }

}  // namespace lrdmd::audit
