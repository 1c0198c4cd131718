#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace freelevy {

unsigned worker_count();
void set_worker_count(unsigned n);  // 0 restores the default

// Runs body(i) for i in [0, n) on worker threads with static interleaved chunks.
// Results must be written by index so output does not depend on scheduling.
// If several iterations throw, the exception from the smallest index is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace freelevy
