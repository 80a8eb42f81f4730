#pragma once

#include <condition_variable>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace patternset {

// Fixed-size worker pool with static range partitioning. Work is split into
// one contiguous block per thread, so per-index results do not depend on the
// thread count.
class ThreadPool {
 public:
  explicit ThreadPool(std::size_t threads = 1);
  ~ThreadPool();

  ThreadPool(const ThreadPool&) = delete;
  ThreadPool& operator=(const ThreadPool&) = delete;

  std::size_t size() const { return workers_.size() + 1; }

  // Calls body(begin, end) over disjoint blocks covering [0, count). Blocks
  // run concurrently; returns when all are done. Exceptions from the body are
  // rethrown on the calling thread.
  void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body);

 private:
  void worker_loop(std::size_t slot);
  void run_block(std::size_t slot);

  std::vector<std::jthread> workers_;
  std::mutex mutex_;
  std::condition_variable start_cv_;
  std::condition_variable done_cv_;
  const std::function<void(std::size_t, std::size_t)>* body_ = nullptr;
  std::size_t count_ = 0;
  std::size_t generation_ = 0;
  std::size_t pending_ = 0;
  bool stopping_ = false;
  std::exception_ptr failure_;
};

// --threads value, falling back to PATTERNSET_THREADS, then 1.
std::size_t resolve_thread_count(std::size_t requested);

}  // namespace patternset
