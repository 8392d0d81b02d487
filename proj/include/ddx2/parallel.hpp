#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace ddx2 {

/// Worker count from DDX2_JOBS, falling back to the hardware concurrency.
inline unsigned default_jobs() {
  if (const char* env = std::getenv("DDX2_JOBS")) {
    try {
      int value = std::stoi(env);
      if (value > 0) return static_cast<unsigned>(value);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs body(i) for every i in [0, count) on up to `jobs` threads. Items are
// claimed in ascending order; the first exception thrown is rethrown after
// all workers stop.
template <class Body>
void parallel_for(std::size_t count, unsigned jobs, Body&& body) {
  jobs = std::max(1u, jobs);
  if (jobs == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (!stop.load(std::memory_order_relaxed)) {
      std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        stop = true;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    unsigned spawn = static_cast<unsigned>(std::min<std::size_t>(jobs, count));
    pool.reserve(spawn);
    for (unsigned t = 0; t < spawn; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
}

/// Wall-clock limit shared by the search routines. A default-constructed
/// deadline never expires.
class Deadline {
public:
  Deadline() = default;
  explicit Deadline(std::chrono::duration<double> budget)
      : at_(std::chrono::steady_clock::now() +
            std::chrono::duration_cast<std::chrono::steady_clock::duration>(budget)) {}

  static Deadline after_seconds(std::optional<double> seconds) {
    if (!seconds) return {};
    return Deadline(std::chrono::duration<double>(*seconds));
  }

  bool expired() const {
    return at_ && std::chrono::steady_clock::now() >= *at_;
  }

private:
  std::optional<std::chrono::steady_clock::time_point> at_;
};

} // namespace ddx2
