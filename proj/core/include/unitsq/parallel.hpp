#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

namespace unitsq {

/// Worker count to use when the caller asks for "all cores".
inline unsigned default_jobs() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

/// Evaluates work(m) for m in [lo, hi] on `jobs` workers and hands each
/// result to sink(m, result) on the calling thread in ascending m order,
/// whatever order the workers finish in. Returns the last m delivered to the
/// sink (lo - 1 if none). Once should_stop() returns true, workers stop
/// claiming new values and only the contiguous prefix already computed is
/// delivered.
/// An exception from work or sink stops the pool and is rethrown.
template <class Work, class Sink, class StopFn>
std::int64_t ordered_parallel_for(std::int64_t lo, std::int64_t hi,
                                  unsigned jobs, Work&& work, Sink&& sink,
                                  StopFn&& should_stop) {
  auto stopped = [&should_stop] { return static_cast<bool>(should_stop()); };
  if (hi < lo) return lo - 1;
  if (jobs <= 1) {
    std::int64_t last = lo - 1;
    for (std::int64_t m = lo; m <= hi && !stopped(); ++m) {
      sink(m, work(m));
      last = m;
    }
    return last;
  }

  using Result = decltype(work(lo));
  std::mutex mu;
  std::condition_variable cv;
  std::map<std::int64_t, Result> ready;
  std::atomic<std::int64_t> next{lo};
  std::atomic<bool> abort{false};
  std::exception_ptr failure;
  unsigned running = jobs;

  auto worker = [&] {
    for (;;) {
      if (abort.load() || stopped()) break;
      const std::int64_t m = next.fetch_add(1);
      if (m > hi) break;
      try {
        Result r = work(m);
        std::lock_guard lock(mu);
        ready.emplace(m, std::move(r));
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        abort = true;
      }
      cv.notify_one();
    }
    std::lock_guard lock(mu);
    --running;
    cv.notify_one();
  };

  std::int64_t last = lo - 1;
  {
    std::vector<std::jthread> pool;
    pool.reserve(jobs);
    for (unsigned i = 0; i < jobs; ++i) pool.emplace_back(worker);

    std::unique_lock lock(mu);
    while (true) {
      cv.wait(lock, [&] {
        return failure || running == 0 ||
               (!ready.empty() && ready.begin()->first == last + 1);
      });
      if (failure) break;
      while (!ready.empty() && ready.begin()->first == last + 1) {
        auto node = ready.extract(ready.begin());
        lock.unlock();
        try {
          sink(node.key(), std::move(node.mapped()));
        } catch (...) {
          lock.lock();
          if (!failure) failure = std::current_exception();
          abort = true;
          break;
        }
        last = node.key();
        lock.lock();
      }
      if (failure) break;
      if (running == 0 &&
          (ready.empty() || ready.begin()->first != last + 1)) {
        break;
      }
    }
    abort = true;
    lock.unlock();
  }  // joins
  if (failure) std::rethrow_exception(failure);
  return last;
}

template <class Work, class Sink>
std::int64_t ordered_parallel_for(std::int64_t lo, std::int64_t hi,
                                  unsigned jobs, Work&& work, Sink&& sink) {
  return ordered_parallel_for(lo, hi, jobs, std::forward<Work>(work),
                              std::forward<Sink>(sink), [] { return false; });
}

}  // namespace unitsq
