#include "wordopt/executor.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <cstring>

#include "wordopt/errors.hpp"
#include "wordopt/logging.hpp"

namespace wordopt {

namespace {

constexpr const char* kAllowlist[] = {"PATH", "HOME", "LANG", "LC_ALL", "TMPDIR"};

std::vector<std::string> build_env(const std::map<std::string, std::string>& overrides) {
    std::vector<std::string> env;
    for (const char* key : kAllowlist) {
        if (overrides.count(key)) continue;
        if (const char* value = std::getenv(key)) env.push_back(std::string(key) + "=" + value);
    }
    for (const auto& [k, v] : overrides) env.push_back(k + "=" + v);
    return env;
}

void drain(int fd, std::string& into) {
    char buf[4096];
    for (;;) {
        const ssize_t got = read(fd, buf, sizeof(buf));
        if (got <= 0) break;
        into.append(buf, static_cast<std::size_t>(got));
    }
}

}  // namespace

ExecResult execute(const ExecSpec& spec) {
    if (spec.command.empty()) throw ExecError("execute: empty command");
    if (!(spec.timeout_s > 0.0)) throw ExecError("execute: timeout must be positive");

    int out_pipe[2];
    int err_pipe[2];
    if (pipe(out_pipe) != 0 || pipe(err_pipe) != 0)
        throw ExecError("execute: pipe failed");

    const auto env_strings = build_env(spec.env);
    log_info("executor", spec.job_id, "start [" + spec.log_tag + "] " + spec.command);
    const auto start = std::chrono::steady_clock::now();

    const pid_t pid = fork();
    if (pid < 0) throw ExecError("execute: fork failed");
    if (pid == 0) {
        // child: own process group so a timeout kill reaps the whole tree
        setpgid(0, 0);
        dup2(out_pipe[1], STDOUT_FILENO);
        dup2(err_pipe[1], STDERR_FILENO);
        close(out_pipe[0]);
        close(out_pipe[1]);
        close(err_pipe[0]);
        close(err_pipe[1]);
        if (!spec.workdir.empty() && chdir(spec.workdir.c_str()) != 0) _exit(127);
        std::vector<char*> envp;
        for (const auto& e : env_strings) envp.push_back(const_cast<char*>(e.c_str()));
        envp.push_back(nullptr);
        const char* argv[] = {"sh", "-c", spec.command.c_str(), nullptr};
        execve("/bin/sh", const_cast<char**>(argv), envp.data());
        _exit(127);
    }

    close(out_pipe[1]);
    close(err_pipe[1]);
    fcntl(out_pipe[0], F_SETFL, O_NONBLOCK);
    fcntl(err_pipe[0], F_SETFL, O_NONBLOCK);

    ExecResult result;
    bool timed_out = false;
    const auto deadline = start + std::chrono::duration<double>(spec.timeout_s);
    int open_fds = 2;
    pollfd fds[2] = {{out_pipe[0], POLLIN, 0}, {err_pipe[0], POLLIN, 0}};

    while (open_fds > 0) {
        const auto now = std::chrono::steady_clock::now();
        if (now >= deadline) {
            timed_out = true;
            break;
        }
        const int wait_ms = std::max<int>(
            1, int(std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count()));
        const int ready = poll(fds, 2, std::min(wait_ms, 200));
        if (ready < 0 && errno != EINTR) break;
        for (auto& p : fds) {
            if (p.fd < 0 || !(p.revents & (POLLIN | POLLHUP))) continue;
            char buf[4096];
            const ssize_t got = read(p.fd, buf, sizeof(buf));
            if (got > 0) {
                auto& into = p.fd == out_pipe[0] ? result.out : result.err;
                into.append(buf, static_cast<std::size_t>(got));
            } else if (got == 0 || (got < 0 && errno != EAGAIN && errno != EINTR)) {
                close(p.fd);
                p.fd = -1;
                --open_fds;
            }
        }
    }

    if (timed_out) {
        kill(-pid, SIGKILL);
        int status = 0;
        waitpid(pid, &status, 0);
        drain(out_pipe[0], result.out);
        drain(err_pipe[0], result.err);
        if (fds[0].fd >= 0) close(out_pipe[0]);
        if (fds[1].fd >= 0) close(err_pipe[0]);
        log_error("executor", spec.job_id, "timeout [" + spec.log_tag + "] after " +
                                               std::to_string(spec.timeout_s) + "s");
        throw ExecError("execute: command timed out after " + std::to_string(spec.timeout_s) +
                        "s: " + spec.command);
    }

    if (fds[0].fd >= 0) close(out_pipe[0]);
    if (fds[1].fd >= 0) close(err_pipe[0]);
    int status = 0;
    waitpid(pid, &status, 0);
    if (WIFEXITED(status))
        result.exit_code = WEXITSTATUS(status);
    else if (WIFSIGNALED(status))
        result.exit_code = 128 + WTERMSIG(status);
    result.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.exit_ok = std::find(spec.expected_exit_codes.begin(), spec.expected_exit_codes.end(),
                               result.exit_code) != spec.expected_exit_codes.end();
    log_info("executor", spec.job_id,
             "done [" + spec.log_tag + "] exit=" + std::to_string(result.exit_code) + " in " +
                 std::to_string(result.seconds) + "s");
    return result;
}

}  // namespace wordopt
