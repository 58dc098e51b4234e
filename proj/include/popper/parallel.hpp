#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <span>
#include <thread>
#include <type_traits>
#include <vector>

namespace popper {

/// Applies `f` to every item on a small worker pool and returns the results
/// in input order. The first exception (by item index) is rethrown after all
/// workers finish. `workers == 0` uses the hardware concurrency.
template <class In, class F>
auto ordered_parallel_map(std::span<const In> items, F f, unsigned workers = 0)
    -> std::vector<std::invoke_result_t<F&, const In&>> {
  using Out = std::invoke_result_t<F&, const In&>;
  const std::size_t n = items.size();
  std::vector<std::optional<Out>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        slots[i].emplace(f(items[i]));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  const auto pool_size = std::min<std::size_t>(workers, n);
  if (pool_size <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(pool_size);
    for (std::size_t w = 0; w < pool_size; ++w) pool.emplace_back(work);
  }

  std::vector<Out> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

}  // namespace popper
