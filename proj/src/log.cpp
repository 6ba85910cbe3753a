#include "flowids/log.hpp"

#include <cstdlib>
#include <cstring>

namespace flowids {

LogLevel log_level() {
    static LogLevel level = [] {
        const char* env = std::getenv("FLOWIDS_LOG");
        if (env == nullptr) return LogLevel::Info;
        if (std::strcmp(env, "debug") == 0) return LogLevel::Debug;
        if (std::strcmp(env, "info") == 0) return LogLevel::Info;
        if (std::strcmp(env, "warn") == 0) return LogLevel::Warn;
        if (std::strcmp(env, "error") == 0) return LogLevel::Error;
        if (std::strcmp(env, "silent") == 0) return LogLevel::Silent;
        return LogLevel::Info;
    }();
    return level;
}

namespace detail {

void log_line(LogLevel, const char* tag, const char* fmt, std::va_list args) {
    std::fprintf(stderr, "[%s] ", tag);
    std::vfprintf(stderr, fmt, args);
    std::fputc('\n', stderr);
}

}  // namespace detail
}  // namespace flowids
