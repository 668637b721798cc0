#include "cbpd/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace cbpd {

namespace {

std::size_t default_threads() {
  if (const char* env = std::getenv("CBPD_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

std::atomic<std::size_t>& configured() {
  static std::atomic<std::size_t> n{0};
  return n;
}

}  // namespace

std::size_t thread_count() {
  const std::size_t n = configured().load();
  return n == 0 ? default_threads() : n;
}

void set_thread_count(std::size_t n) { configured().store(n); }

}  // namespace cbpd
