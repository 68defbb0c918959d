#include <atomic>
#include <csignal>
#include <iostream>

#include "cli/commands.hpp"

namespace {

std::atomic<bool> g_interrupted{false};

extern "C" void on_sigint(int) { g_interrupted.store(true); }

}  // namespace

int main(int argc, char** argv) {
  static_assert(std::atomic<bool>::is_always_lock_free);
  std::signal(SIGINT, on_sigint);
  std::ios::sync_with_stdio(false);
  return unitsq::cli::run(argc, argv, std::cout, std::cerr, &g_interrupted);
}
