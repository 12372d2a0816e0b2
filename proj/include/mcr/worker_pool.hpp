#pragma once

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace mcr {

// Fixed set of worker threads executing index-parallel loops. parallel_for
// blocks until every index has run; the first exception thrown by a body is
// rethrown on the calling thread. One loop at a time per pool.
class WorkerPool {
 public:
  explicit WorkerPool(std::size_t workers = 1) : workers_(std::max<std::size_t>(workers, 1)) {
    for (std::size_t i = 1; i < workers_; ++i) {
      threads_.emplace_back([this] { worker_loop(); });
    }
  }

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  ~WorkerPool() {
    {
      std::lock_guard lock(mutex_);
      stopping_ = true;
    }
    wake_.notify_all();
    for (auto& t : threads_) t.join();
  }

  [[nodiscard]] std::size_t size() const noexcept { return workers_; }

  void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    if (n == 0) return;
    if (workers_ == 1 || n == 1) {
      for (std::size_t i = 0; i < n; ++i) body(i);
      return;
    }
    {
      std::lock_guard lock(mutex_);
      body_ = &body;
      total_ = n;
      next_.store(0);
      done_ = 0;
      error_ = nullptr;
      ++generation_;
    }
    wake_.notify_all();
    run_items();
    std::unique_lock lock(mutex_);
    finished_.wait(lock, [&] { return done_ == total_ && active_ == 0; });
    body_ = nullptr;
    if (error_) std::rethrow_exception(error_);
  }

 private:
  void worker_loop() {
    std::uint64_t seen = 0;
    for (;;) {
      {
        std::unique_lock lock(mutex_);
        wake_.wait(lock, [&] { return stopping_ || generation_ != seen; });
        if (stopping_) return;
        seen = generation_;
        ++active_;
      }
      run_items();
      {
        std::lock_guard lock(mutex_);
        --active_;
      }
      finished_.notify_all();
    }
  }

  void run_items() {
    std::size_t completed = 0;
    for (;;) {
      const std::size_t i = next_.fetch_add(1);
      if (i >= total_) break;
      try {
        (*body_)(i);
      } catch (...) {
        std::lock_guard lock(mutex_);
        if (!error_) error_ = std::current_exception();
      }
      ++completed;
    }
    if (completed > 0) {
      std::lock_guard lock(mutex_);
      done_ += completed;
    }
    finished_.notify_all();
  }

  std::size_t workers_;
  std::vector<std::thread> threads_;
  std::mutex mutex_;
  std::condition_variable wake_;
  std::condition_variable finished_;
  const std::function<void(std::size_t)>* body_ = nullptr;
  std::size_t total_ = 0;
  std::atomic<std::size_t> next_{0};
  std::size_t done_ = 0;
  std::size_t active_ = 0;
  std::uint64_t generation_ = 0;
  bool stopping_ = false;
  std::exception_ptr error_;
};

// Worker count from MCR_WORKERS, else hardware concurrency.
[[nodiscard]] inline std::size_t default_worker_count() {
  if (const char* env = std::getenv("MCR_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<std::size_t>(v);
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace mcr
