#pragma once

#include <string_view>

#include <json.hpp>

namespace depositlag {

enum class LogLevel { kDebug, kInfo, kWarn, kError };

// One JSON object per line on stderr: {"level", "event", ...fields}.
void log_event(LogLevel level, std::string_view event, const nlohmann::json& fields = nlohmann::json::object());

void set_min_log_level(LogLevel level);

}  // namespace depositlag
