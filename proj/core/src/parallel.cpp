#include "polyinv/parallel.hpp"

#include <cstdlib>
#include <string>

namespace polyinv {

int default_thread_count() {
  if (const char* env = std::getenv("POLYINV_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace polyinv
