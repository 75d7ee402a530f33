#pragma once

#include <cstddef>
#include <functional>

namespace hypme {

/// Caps the number of worker threads used by every parallel kernel.
/// Zero restores the default (hardware concurrency).
void set_thread_limit(std::size_t threads);
std::size_t thread_limit();

/// Runs body(i) for i in [begin, end) across worker threads, in contiguous
/// static blocks. Callers write results into per-index slots, so the outcome
/// never depends on the schedule.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& body);

}  // namespace hypme
