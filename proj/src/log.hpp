#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace fpt {

enum class log_level { error = 0, warn = 1, info = 2, debug = 3 };

// Verbosity is controlled by the FPT_LOG environment variable
// (error, warn, info, debug). Default: warn.
inline log_level current_log_level() {
  static log_level level = [] {
    const char* env = std::getenv("FPT_LOG");
    if (!env) return log_level::warn;
    if (std::strcmp(env, "error") == 0) return log_level::error;
    if (std::strcmp(env, "warn") == 0) return log_level::warn;
    if (std::strcmp(env, "info") == 0) return log_level::info;
    if (std::strcmp(env, "debug") == 0) return log_level::debug;
    return log_level::warn;
  }();
  return level;
}

template <typename... Args>
void log(log_level level, const char* fmt, Args... args) {
  if (level > current_log_level()) return;
  static const char* names[] = {"error", "warn", "info", "debug"};
  std::fprintf(stderr, "fpt[%s]: ", names[static_cast<int>(level)]);
  std::fprintf(stderr, fmt, args...);
  std::fputc('\n', stderr);
}

inline void log(log_level level, const char* msg) { log(level, "%s", msg); }

}  // namespace fpt
