#include "depositlag/log.h"

#include <atomic>
#include <iostream>
#include <mutex>

namespace depositlag {
namespace {

std::atomic<LogLevel> g_min_level{LogLevel::kInfo};
std::mutex g_log_mutex;

std::string_view level_name(LogLevel level) {
  switch (level) {
    case LogLevel::kDebug: return "debug";
    case LogLevel::kInfo: return "info";
    case LogLevel::kWarn: return "warn";
    case LogLevel::kError: return "error";
  }
  return "info";
}

}  // namespace

void set_min_log_level(LogLevel level) { g_min_level = level; }

void log_event(LogLevel level, std::string_view event, const nlohmann::json& fields) {
  if (level < g_min_level.load()) return;
  nlohmann::ordered_json line;
  line["level"] = level_name(level);
  line["event"] = event;
  if (fields.is_object()) {
    for (const auto& [k, v] : fields.items()) line[k] = v;
  }
  const std::string text = line.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
  std::lock_guard lock(g_log_mutex);
  std::cerr << text << '\n';
}

}  // namespace depositlag
