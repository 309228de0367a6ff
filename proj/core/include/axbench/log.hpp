#pragma once

#include <string_view>

namespace axbench {

enum class LogLevel { debug = 0, info = 1, warning = 2, error = 3, off = 4 };

/// Messages below `level` are dropped. Default: warning.
void set_log_level(LogLevel level) noexcept;
LogLevel log_level() noexcept;

/// Writes "axbench: <level>: <message>" to standard error. Thread-safe.
void log(LogLevel level, std::string_view message);
inline void log_warning(std::string_view message) { log(LogLevel::warning, message); }
inline void log_info(std::string_view message) { log(LogLevel::info, message); }

}  // namespace axbench
