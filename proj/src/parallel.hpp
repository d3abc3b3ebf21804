#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace optstop::detail {

/// Runs process(acc, first, last) over [0, reps) split into chunks of
/// chunk_size, each chunk starting from a copy of `initial`. Returns the
/// per-chunk accumulators in chunk order; the caller merges them in that
/// order.
template <class Acc, class Process>
std::vector<Acc> run_chunked(std::uint64_t reps, unsigned workers, std::uint64_t chunk_size,
                             const Acc& initial, Process process) {
  const std::uint64_t chunks = (reps + chunk_size - 1) / chunk_size;
  std::vector<Acc> results(chunks, initial);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    try {
      for (std::uint64_t c = next.fetch_add(1); c < chunks; c = next.fetch_add(1)) {
        const std::uint64_t first = c * chunk_size;
        const std::uint64_t last = std::min(reps, first + chunk_size);
        process(results[c], first, last);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next.store(chunks);
    }
  };

  const auto threads = static_cast<unsigned>(
      std::clamp<std::uint64_t>(workers, 1, std::max<std::uint64_t>(chunks, 1)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace optstop::detail
