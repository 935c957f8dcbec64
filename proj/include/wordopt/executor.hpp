#ifndef WORDOPT_EXECUTOR_HPP
#define WORDOPT_EXECUTOR_HPP

#include <map>
#include <string>
#include <vector>

namespace wordopt {

// Shell launcher for third-party tools: timeout-enforced, output-captured,
// centrally logged, and never inheriting more environment than the allowlist
// (PATH, HOME, LANG, LC_ALL, TMPDIR) plus explicit overrides.
struct ExecSpec {
    std::string command;  // run via /bin/sh -c
    std::string workdir;  // empty: inherit the caller's cwd
    std::map<std::string, std::string> env;
    double timeout_s = 60.0;
    std::vector<int> expected_exit_codes{0};
    std::string log_tag;
    std::uint64_t job_id = 0;
};

struct ExecResult {
    int exit_code = -1;
    bool exit_ok = false;  // exit_code is in expected_exit_codes
    std::string out;
    std::string err;
    double seconds = 0.0;
};

/// Runs the command. Throws ExecError when the process cannot be launched or
/// exceeds its timeout (the whole process group is killed first). Unexpected
/// exit codes are returned flagged, not thrown.
ExecResult execute(const ExecSpec& spec);

}  // namespace wordopt

#endif
