#include "curlsob/log.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace curlsob::log {
namespace {

Level initial_level() {
  if (const char* env = std::getenv("CURLSOB_LOG")) {
    const std::string v(env);
    if (v == "debug") return Level::kDebug;
    if (v == "info") return Level::kInfo;
  }
  return Level::kQuiet;
}

std::atomic<Level>& current() {
  static std::atomic<Level> level{initial_level()};
  return level;
}

}  // namespace

Level level() { return current().load(std::memory_order_relaxed); }
void set_level(Level level) { current().store(level, std::memory_order_relaxed); }

}  // namespace curlsob::log
