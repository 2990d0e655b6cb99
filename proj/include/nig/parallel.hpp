#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace nig {

/// Splits [0, count) into `workers` contiguous chunks and runs
/// `body(begin, end, chunk)` on each, one thread per chunk. Chunk k always
/// covers the same range for a given (count, workers), so callers that reduce
/// per-chunk results in chunk order get the same answer as a serial run.
/// The first exception thrown by any chunk is rethrown after all join.
template <typename Body>
void parallel_chunks(std::size_t count, std::size_t workers, Body&& body) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers <= 1) {
    body(std::size_t{0}, count, std::size_t{0});
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (std::size_t k = 0; k < workers; ++k) {
      const std::size_t begin = count * k / workers;
      const std::size_t end = count * (k + 1) / workers;
      threads.emplace_back([&, begin, end, k] {
        try {
          body(begin, end, k);
        } catch (...) {
          errors[k] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace nig
