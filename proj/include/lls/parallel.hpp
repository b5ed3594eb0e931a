#pragma once

// Deterministic parallel reduction. Work items are cut into fixed blocks
// whose partial results are merged in block order, so the result is the same
// for any worker count.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace lls {

/// Worker count from LLS_LAB_THREADS, else the hardware concurrency.
inline std::size_t default_workers() {
  if (const char* env = std::getenv("LLS_LAB_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Reduces items [0, count) into copies of `proto`: body(acc, i) per item,
/// then acc.merge(other) over blocks in block order. Finished blocks are
/// folded into the result as soon as all earlier blocks are in, so only
/// out-of-order partials are held. Exceptions from the body are rethrown on
/// the calling thread.
template <class Acc, class Body>
Acc parallel_reduce(std::size_t count, std::size_t workers, const Acc& proto, Body body,
                    std::size_t block = 256) {
  block = std::max<std::size_t>(block, 1);
  const std::size_t nblocks = (count + block - 1) / block;
  Acc out = proto;
  std::map<std::size_t, Acc> pending;
  std::size_t merged = 0;
  std::mutex merge_mutex;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> stop{false};

  auto run = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= nblocks || stop.load()) return;
      try {
        Acc acc = proto;
        const std::size_t end = std::min(count, (b + 1) * block);
        for (std::size_t i = b * block; i < end; ++i) body(acc, i);
        std::lock_guard lock(merge_mutex);
        pending.emplace(b, std::move(acc));
        for (auto it = pending.find(merged); it != pending.end(); it = pending.find(merged)) {
          out.merge(it->second);
          pending.erase(it);
          ++merged;
        }
      } catch (...) {
        std::lock_guard lock(merge_mutex);
        if (!failure) failure = std::current_exception();
        stop = true;
        return;
      }
    }
  };

  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(nblocks, 1));
  if (workers == 1) {
    run();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace lls
