#ifndef WORDOPT_LOGGING_HPP
#define WORDOPT_LOGGING_HPP

#include <cstdint>
#include <string>
#include <string_view>

namespace wordopt {

enum class LogLevel : int { debug = 0, info = 1, warn = 2, error = 3 };

// Central log: one line per event, "timestamp level component job_id message",
// flushed per line. Everything below the threshold is dropped.
class Logger {
  public:
    static Logger& global();

    void set_level(LogLevel level);
    LogLevel level() const;

    /// Also append to this file (the stderr stream stays active).
    void set_file(const std::string& path);

    void log(LogLevel level, std::string_view component, std::uint64_t job_id,
             std::string_view message);

  private:
    Logger() = default;
};

inline void log_info(std::string_view component, std::uint64_t job_id, std::string_view message) {
    Logger::global().log(LogLevel::info, component, job_id, message);
}
inline void log_warn(std::string_view component, std::uint64_t job_id, std::string_view message) {
    Logger::global().log(LogLevel::warn, component, job_id, message);
}
inline void log_error(std::string_view component, std::uint64_t job_id, std::string_view message) {
    Logger::global().log(LogLevel::error, component, job_id, message);
}

}  // namespace wordopt

#endif
