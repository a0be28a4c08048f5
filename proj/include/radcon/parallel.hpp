#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace radcon {

// Coarse-grained task runner. Workers write to disjoint slots only; every
// reduction in the library is a serial ascending-index sum, so results are
// bit-identical for any thread count.
class Parallel {
 public:
  explicit Parallel(int threads = 1) : threads_(threads < 1 ? 1 : threads) {}

  int threads() const { return threads_; }

  template <typename F>
  void run_tasks(std::size_t count, F&& task) const {
    if (count == 0) return;
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(threads_), count);
    if (workers == 1) {
      for (std::size_t i = 0; i < count; ++i) task(i);
      return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w]() {
        for (std::size_t i = w; i < count; i += workers) task(i);
      });
    }
    for (auto& t : pool) t.join();
  }

 private:
  int threads_;
};

}  // namespace radcon
