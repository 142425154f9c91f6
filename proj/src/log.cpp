#include "metacomb/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace metacomb {

LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("METACOMB_LOG");
        if (!env) return LogLevel::warn;
        if (std::strcmp(env, "debug") == 0) return LogLevel::debug;
        if (std::strcmp(env, "info") == 0) return LogLevel::info;
        if (std::strcmp(env, "warn") == 0) return LogLevel::warn;
        if (std::strcmp(env, "error") == 0) return LogLevel::error;
        if (std::strcmp(env, "off") == 0) return LogLevel::off;
        return LogLevel::warn;
    }();
    return level;
}

void log_message(LogLevel level, const std::string& msg) {
    if (level < log_level()) return;
    static const char* names[] = {"debug", "info", "warn", "error"};
    std::fprintf(stderr, "[%s] %s\n", names[static_cast<int>(level)], msg.c_str());
}

} // namespace metacomb
