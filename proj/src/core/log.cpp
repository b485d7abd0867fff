#include "core/log.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace csf {

namespace {

LogLevel level_from_env() {
    const char *env = std::getenv("CSF_LOG");
    if (env == nullptr) return LogLevel::Error;
    if (std::strcmp(env, "debug") == 0) return LogLevel::Debug;
    if (std::strcmp(env, "info") == 0) return LogLevel::Info;
    return LogLevel::Error;
}

std::atomic<int> g_level{static_cast<int>(level_from_env())};

void emit(const char *tag, const std::string &message) {
    std::fprintf(stderr, "[csf %s] %s\n", tag, message.c_str());
}

} // namespace

LogLevel log_level() { return static_cast<LogLevel>(g_level.load()); }

void set_log_level(LogLevel level) { g_level.store(static_cast<int>(level)); }

void log_error(const std::string &message) { emit("error", message); }

void log_info(const std::string &message) {
    if (g_level.load() >= static_cast<int>(LogLevel::Info)) emit("info", message);
}

void log_debug(const std::string &message) {
    if (g_level.load() >= static_cast<int>(LogLevel::Debug)) emit("debug", message);
}

} // namespace csf
