#include "hyperlab/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace hyperlab {

namespace {

unsigned initial_count() {
  if (const char* env = std::getenv("HYPERLAB_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
      // Unparseable values fall back to the hardware count.
    }
  }
  return 0;
}

std::atomic<unsigned>& configured() {
  static std::atomic<unsigned> count{initial_count()};
  return count;
}

}  // namespace

void set_thread_count(unsigned count) { configured().store(count); }

unsigned thread_count() {
  const unsigned c = configured().load();
  if (c != 0) return c;
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace hyperlab
