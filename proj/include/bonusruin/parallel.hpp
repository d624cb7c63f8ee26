#pragma once

#include <cstddef>
#include <functional>

namespace bonusruin {

/// Worker count from BONUSRUIN_THREADS, else 1.
unsigned default_thread_count();

/// Runs body(i) for i in [0, n) on up to `threads` workers (0 = default).
/// Items are independent; the first exception thrown is rethrown here.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace bonusruin
