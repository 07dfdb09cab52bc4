#pragma once

#include <cstddef>
#include <functional>

namespace twjscc {

// Resolves a worker count: `requested` if > 0, else the TWJSCC_THREADS
// environment variable, else std::thread::hardware_concurrency().
std::size_t effective_thread_count(std::size_t requested = 0);

// Runs fn(i) for i in [0, n) on up to `threads` workers, static contiguous
// chunks.  Callers keep determinism by writing to slot i only; any exception
// is rethrown on the calling thread.
void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace twjscc
