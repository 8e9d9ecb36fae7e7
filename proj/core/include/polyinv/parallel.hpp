#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

namespace polyinv {

/// Worker count: POLYINV_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
int default_thread_count();

/// Evaluates f(0) .. f(count-1) on up to `threads` workers (0 = default) and
/// returns results in index order. If any call throws, the exception of the
/// lowest failing index is rethrown after all workers finish.
template <class F>
auto parallel_map(std::size_t count, F&& f, int threads = 0)
    -> std::vector<decltype(f(std::size_t{}))> {
  using R = decltype(f(std::size_t{}));
  std::vector<std::optional<R>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        slots[i].emplace(f(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int wanted = threads > 0 ? threads : default_thread_count();
  const auto n = std::min<std::size_t>(static_cast<std::size_t>(wanted), count);
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n);
    for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<R> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace polyinv
