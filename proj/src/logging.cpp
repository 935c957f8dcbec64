#include "wordopt/logging.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <mutex>

namespace wordopt {

namespace {

std::mutex g_mutex;
std::atomic<int> g_level{int(LogLevel::warn)};
std::ofstream g_file;

const char* level_name(LogLevel l) {
    switch (l) {
        case LogLevel::debug: return "DEBUG";
        case LogLevel::info: return "INFO";
        case LogLevel::warn: return "WARN";
        case LogLevel::error: return "ERROR";
    }
    return "?";
}

std::string timestamp() {
    using namespace std::chrono;
    const auto now = system_clock::now();
    const auto t = system_clock::to_time_t(now);
    const auto ms = duration_cast<milliseconds>(now.time_since_epoch()).count() % 1000;
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, int(ms));
    return buf;
}

}  // namespace

Logger& Logger::global() {
    static Logger logger;
    return logger;
}

void Logger::set_level(LogLevel level) {
    g_level.store(int(level));
}

LogLevel Logger::level() const {
    return LogLevel(g_level.load());
}

void Logger::set_file(const std::string& path) {
    std::lock_guard lock(g_mutex);
    g_file.open(path, std::ios::app);
}

void Logger::log(LogLevel level, std::string_view component, std::uint64_t job_id,
                 std::string_view message) {
    if (int(level) < g_level.load(std::memory_order_relaxed)) return;
    std::lock_guard lock(g_mutex);
    std::string line = timestamp();
    line += ' ';
    line += level_name(level);
    line += ' ';
    line.append(component);
    line += ' ';
    line += std::to_string(job_id);
    line += ' ';
    line.append(message);
    line += '\n';
    std::fwrite(line.data(), 1, line.size(), stderr);
    std::fflush(stderr);
    if (g_file.is_open()) {
        g_file << line;
        g_file.flush();
    }
}

}  // namespace wordopt
