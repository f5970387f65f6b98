#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace cliquelab::detail {

// Runs fn(0) .. fn(count-1), possibly across threads. Each index writes only
// its own results, so callers aggregate in index order afterwards and the
// outcome is independent of the thread count. Exceptions are captured per
// index and the lowest-index one is rethrown, which matches what the serial
// path throws first.
inline void parallel_for(std::int64_t count, std::int32_t threads,
                         const std::function<void(std::int64_t)>& fn) {
  if (threads < 1) threads = 1;
  if (threads == 1 || count <= 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }

  std::atomic<std::int64_t> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  const auto worker = [&] {
    while (true) {
      const std::int64_t i = next.fetch_add(1);
      if (i >= count) break;
      try {
        fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };

  std::vector<std::thread> pool;
  const auto worker_count = static_cast<std::size_t>(std::min<std::int64_t>(threads, count));
  pool.reserve(worker_count);
  for (std::size_t i = 0; i < worker_count; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace cliquelab::detail
