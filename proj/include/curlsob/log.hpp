#pragma once

#include <iostream>
#include <sstream>

namespace curlsob::log {

enum class Level { kQuiet = 0, kInfo = 1, kDebug = 2 };

Level level();
void set_level(Level level);

template <typename... Args>
void info(const Args&... args) {
  if (level() < Level::kInfo) return;
  std::ostringstream os;
  (os << ... << args);
  std::clog << "[curlsob] " << os.str() << '\n';
}

template <typename... Args>
void debug(const Args&... args) {
  if (level() < Level::kDebug) return;
  std::ostringstream os;
  (os << ... << args);
  std::clog << "[curlsob:debug] " << os.str() << '\n';
}

}  // namespace curlsob::log
