#include "castor/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace castor {

std::size_t resolve_threads(std::size_t requested) {
  if (requested > 0) {
    return requested;
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t, std::size_t, std::size_t)>& body,
                  std::size_t grain) {
  if (count == 0) {
    return;
  }
  grain = std::max<std::size_t>(1, grain);
  const std::size_t chunks{(count + grain - 1) / grain};
  const std::size_t workers{std::min(resolve_threads(threads), chunks)};
  if (workers == 1) {
    body(0, count, 0);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run{[&](std::size_t worker) {
    try {
      for (std::size_t chunk{next++}; chunk < chunks; chunk = next++) {
        const std::size_t begin{chunk * grain};
        body(begin, std::min(count, begin + grain), worker);
      }
    } catch (...) {
      const std::lock_guard lock{failure_mutex};
      if (!failure) {
        failure = std::current_exception();
      }
      next = chunks;
    }
  }};

  {
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w{1}; w < workers; ++w) {
      pool.emplace_back(run, w);
    }
    run(0);
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
}

}  // namespace castor
