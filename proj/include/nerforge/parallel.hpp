#ifndef NERFORGE_PARALLEL_HPP
#define NERFORGE_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <type_traits>
#include <vector>

namespace nerforge {

// Evaluates fn(i) for i in [0, n) on up to `threads` workers and returns the
// results in index order, so the output never depends on scheduling. The
// first exception (lowest index) is rethrown after all workers join.
template <typename Fn>
auto parallel_map(std::size_t n, unsigned threads, Fn&& fn)
    -> std::vector<std::invoke_result_t<Fn&, std::size_t>> {
  using Result = std::invoke_result_t<Fn&, std::size_t>;
  std::vector<Result> results;
  if (threads <= 1 || n <= 1) {
    results.reserve(n);
    for (std::size_t i = 0; i < n; ++i) results.push_back(fn(i));
    return results;
  }

  std::vector<std::optional<Result>> slots(n);
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::size_t error_index = n;
  std::exception_ptr error;

  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const unsigned count =
        static_cast<unsigned>(std::min<std::size_t>(threads, n));
    pool.reserve(count);
    for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
  results.reserve(n);
  for (auto& slot : slots) results.push_back(std::move(*slot));
  return results;
}

}  // namespace nerforge

#endif  // NERFORGE_PARALLEL_HPP
