#pragma once

#include <iostream>
#include <mutex>
#include <string_view>

namespace gaborset::log {

inline std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

inline bool& quiet() {
  static bool q = false;
  return q;
}

inline void info(std::string_view msg) {
  if (quiet()) return;
  std::lock_guard lock(sink_mutex());
  std::cerr << "[info] " << msg << '\n';
}

inline void warn(std::string_view msg) {
  std::lock_guard lock(sink_mutex());
  std::cerr << "[warn] " << msg << '\n';
}

}  // namespace gaborset::log
