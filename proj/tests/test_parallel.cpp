#include <doctest.h>

#include <atomic>
#include <chrono>
#include <stdexcept>
#include <thread>
#include <vector>

#include "unitsq/parallel.hpp"

using namespace unitsq;

TEST_SUITE("parallel") {

TEST_CASE("results arrive in ascending order whatever the finish order") {
  for (unsigned jobs : {1u, 2u, 4u, 8u}) {
    std::vector<std::int64_t> seen;
    const auto last = ordered_parallel_for(
        1, 200, jobs,
        [](std::int64_t m) {
          // Early values take longest.
          std::this_thread::sleep_for(std::chrono::microseconds((200 - m) % 17 * 20));
          return m * m;
        },
        [&](std::int64_t m, std::int64_t sq) {
          CHECK(sq == m * m);
          seen.push_back(m);
        });
    CHECK(last == 200);
    REQUIRE(seen.size() == 200);
    for (std::size_t i = 0; i < seen.size(); ++i) {
      CHECK(seen[i] == static_cast<std::int64_t>(i) + 1);
    }
  }
}

TEST_CASE("empty range") {
  int calls = 0;
  CHECK(ordered_parallel_for(5, 4, 3, [](std::int64_t m) { return m; },
                             [&](std::int64_t, std::int64_t) { ++calls; }) == 4);
  CHECK(calls == 0);
}

TEST_CASE("stopping keeps a contiguous prefix") {
  for (unsigned jobs : {1u, 3u}) {
    std::atomic<int> done{0};
    std::vector<std::int64_t> seen;
    const auto last = ordered_parallel_for(
        1, 100000, jobs, [&](std::int64_t m) { ++done; return m; },
        [&](std::int64_t m, std::int64_t) { seen.push_back(m); },
        [&] { return done.load() >= 50; });
    CHECK(last < 100000);
    CHECK(last == static_cast<std::int64_t>(seen.size()));
    for (std::size_t i = 0; i < seen.size(); ++i) {
      CHECK(seen[i] == static_cast<std::int64_t>(i) + 1);
    }
  }
}

TEST_CASE("exceptions propagate") {
  for (unsigned jobs : {1u, 4u}) {
    CHECK_THROWS_AS(ordered_parallel_for(
                        1, 100, jobs,
                        [](std::int64_t m) {
                          if (m == 37) throw std::runtime_error("boom");
                          return m;
                        },
                        [](std::int64_t, std::int64_t) {}),
                    std::runtime_error);
    CHECK_THROWS_AS(ordered_parallel_for(
                        1, 100, jobs, [](std::int64_t m) { return m; },
                        [](std::int64_t m, std::int64_t) {
                          if (m == 10) throw std::logic_error("sink");
                        }),
                    std::logic_error);
  }
}

TEST_CASE("default worker count") { CHECK(default_jobs() >= 1); }

}  // TEST_SUITE
