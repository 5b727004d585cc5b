#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace chiraltop {

// Worker count: set_worker_count() if called with n > 0, else CHIRALTOP_THREADS, else hardware.
int worker_count();
void set_worker_count(int n);

namespace detail {

inline constexpr std::size_t kBlock = 64;

// Runs task(b) for every block b in [0, blocks). The exception of the lowest failing
// block is rethrown so failures are reported the same way for any worker count.
template <class Task>
void run_blocks(std::size_t blocks, Task&& task) {
  std::vector<std::exception_ptr> errors(blocks);
  auto guarded = [&](std::size_t b) {
    try {
      task(b);
    } catch (...) {
      errors[b] = std::current_exception();
    }
  };
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(worker_count()), blocks);
  if (workers <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) guarded(b);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t b = next++; b < blocks; b = next++) guarded(b);
      });
    }
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace detail

template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const std::size_t blocks = (n + detail::kBlock - 1) / detail::kBlock;
  detail::run_blocks(blocks, [&](std::size_t b) {
    const std::size_t end = std::min(n, (b + 1) * detail::kBlock);
    for (std::size_t i = b * detail::kBlock; i < end; ++i) fn(i);
  });
}

// Sum of fn(i) over [0, n): sequential inside fixed blocks, pairwise across blocks.
// The association order depends only on n, never on the worker count.
template <class T, class Fn>
T ordered_sum(std::size_t n, Fn&& fn, T zero = T{}) {
  const std::size_t blocks = (n + detail::kBlock - 1) / detail::kBlock;
  if (blocks == 0) return zero;
  std::vector<T> partial(blocks, zero);
  detail::run_blocks(blocks, [&](std::size_t b) {
    T acc = zero;
    const std::size_t end = std::min(n, (b + 1) * detail::kBlock);
    for (std::size_t i = b * detail::kBlock; i < end; ++i) acc += fn(i);
    partial[b] = acc;
  });
  for (std::size_t stride = 1; stride < blocks; stride *= 2)
    for (std::size_t i = 0; i + stride < blocks; i += 2 * stride) partial[i] += partial[i + stride];
  return partial[0];
}

}  // namespace chiraltop
