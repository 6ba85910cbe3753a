#pragma once

// Minimal stderr logger. Level comes from the FLOWIDS_LOG environment
// variable only (debug|info|warn|error|silent), default info.

#include <cstdarg>
#include <cstdio>

namespace flowids {

enum class LogLevel { Debug = 0, Info = 1, Warn = 2, Error = 3, Silent = 4 };

LogLevel log_level();

namespace detail {
void log_line(LogLevel level, const char* tag, const char* fmt, std::va_list args);
}

inline void log_at(LogLevel level, const char* tag, const char* fmt, ...) {
    if (static_cast<int>(level) < static_cast<int>(log_level())) return;
    std::va_list args;
    va_start(args, fmt);
    detail::log_line(level, tag, fmt, args);
    va_end(args);
}

#define FLOWIDS_LOG_FN(name, level, tag)                            \
    inline void name(const char* fmt, ...) {                        \
        if (static_cast<int>(level) < static_cast<int>(log_level())) return; \
        std::va_list args;                                          \
        va_start(args, fmt);                                        \
        detail::log_line(level, tag, fmt, args);                    \
        va_end(args);                                               \
    }

FLOWIDS_LOG_FN(log_debug, LogLevel::Debug, "debug")
FLOWIDS_LOG_FN(log_info, LogLevel::Info, "info")
FLOWIDS_LOG_FN(log_warn, LogLevel::Warn, "warn")
FLOWIDS_LOG_FN(log_error, LogLevel::Error, "error")

#undef FLOWIDS_LOG_FN

}  // namespace flowids
