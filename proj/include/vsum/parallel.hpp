#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "vsum/common.hpp"

namespace vsum {

int default_threads();
void set_default_threads(int n);

// Calls fn(i) for i in [0, n) on a small worker pool. Each index is visited once;
// callers write into pre-sized slots so the result does not depend on scheduling.
template <class Fn>
void parallel_for(size_t n, Fn&& fn, int threads = 0) {
  if (threads <= 0) threads = default_threads();
  threads = static_cast<int>(std::min<size_t>(static_cast<size_t>(threads), n));
  if (threads <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (;;) {
        size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(err_mu);
          if (!err) err = std::current_exception();
          next = n;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

// Pairwise (tree) summation in index order.
template <class T>
T pairwise_sum(const T* a, size_t n) {
  if (n == 0) return T{};
  if (n <= 8) {
    T s = a[0];
    for (size_t i = 1; i < n; ++i) s += a[i];
    return s;
  }
  size_t h = n / 2;
  return pairwise_sum(a, h) + pairwise_sum(a + h, n - h);
}

template <class T>
T pairwise_sum(const std::vector<T>& v) {
  return pairwise_sum(v.data(), v.size());
}

}  // namespace vsum
