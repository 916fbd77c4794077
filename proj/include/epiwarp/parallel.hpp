// Copyright contributors to the epiwarp project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace epiwarp {

// Runs fn(i) for i in [begin, end) on up to `threads` workers pulling from a
// shared counter. Callers must make each index write disjoint state (or merge
// results with an exact, order-free operation) so output stays bit-identical
// for any thread count.
inline void parallel_for(int begin, int end, int threads, const std::function<void(int)>& fn) {
  if (end <= begin) return;
  if (threads <= 1 || end - begin == 1) {
    for (int i = begin; i < end; ++i) fn(i);
    return;
  }
  const int workers = std::min(threads, end - begin);
  std::atomic<int> next{begin};
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= end) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers) - 1);
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

// Variant handing each worker a stable slot index in [0, workers); used when
// workers accumulate into per-slot buffers that get merged afterwards.
inline int parallel_for_slots(int begin, int end, int threads,
                              const std::function<void(int item, int slot)>& fn) {
  if (end <= begin) return 0;
  const int workers = std::max(1, std::min(threads, end - begin));
  if (workers == 1) {
    for (int i = begin; i < end; ++i) fn(i, 0);
    return 1;
  }
  std::atomic<int> next{begin};
  auto worker = [&](int slot) {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= end) return;
      fn(i, slot);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers) - 1);
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker, w);
  worker(0);
  for (auto& t : pool) t.join();
  return workers;
}

}  // namespace epiwarp
