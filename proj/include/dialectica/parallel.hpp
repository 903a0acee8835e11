#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>

#include "dialectica/fincat.hpp"

namespace dialectica {

struct SearchOptions {
  std::uint64_t cap = cat::kDefaultCap;
  unsigned jobs = 0;  // 0: hardware concurrency
};

unsigned resolve_jobs(unsigned jobs);

// Smallest i in [0, n) with fn(i) true. Indices are scanned by several
// threads; the result does not depend on the thread count.
std::optional<std::size_t> parallel_find_first(std::size_t n, unsigned jobs, const std::function<bool(std::size_t)>& fn);

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn);

}  // namespace dialectica
