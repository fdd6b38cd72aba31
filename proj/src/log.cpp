#include "sbdae/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

#include "sbdae/error.hpp"

namespace sbdae::log {

namespace {
std::atomic<Level> g_level{Level::warn};
std::mutex g_mutex;

const char *tag(Level l) {
    switch (l) {
        case Level::debug: return "debug";
        case Level::info: return "info";
        case Level::warn: return "warn";
        case Level::error: return "error";
        default: return "";
    }
}
}  // namespace

void set_level(Level level) { g_level = level; }
Level level() { return g_level; }

Level parse_level(std::string_view name) {
    if (name == "debug") return Level::debug;
    if (name == "info") return Level::info;
    if (name == "warn") return Level::warn;
    if (name == "error") return Level::error;
    if (name == "off") return Level::off;
    throw InvalidArgument("unknown log level '" + std::string(name) + "'");
}

void write(Level l, std::string_view message) {
    if (l < g_level.load() || l == Level::off) return;
    std::lock_guard lock(g_mutex);
    std::cerr << "[sbdae " << tag(l) << "] " << message << '\n';
}

}  // namespace sbdae::log
