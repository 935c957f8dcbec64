#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>

#include "wordopt/errors.hpp"
#include "wordopt/executor.hpp"

using namespace wordopt;

TEST_CASE("execute captures stdout and exit status") {
    ExecSpec spec;
    spec.command = "echo hello-from-test";
    auto res = execute(spec);
    CHECK(res.exit_code == 0);
    CHECK(res.exit_ok);
    CHECK(res.out == "hello-from-test\n");
    CHECK(res.err.empty());
    CHECK(res.seconds >= 0.0);
}

TEST_CASE("execute separates stderr from stdout") {
    ExecSpec spec;
    spec.command = "echo warn-text 1>&2";
    auto res = execute(spec);
    CHECK(res.out.empty());
    CHECK(res.err == "warn-text\n");
}

TEST_CASE("unexpected exit codes are flagged, not thrown") {
    ExecSpec spec;
    spec.command = "exit 7";
    auto res = execute(spec);
    CHECK(res.exit_code == 7);
    CHECK_FALSE(res.exit_ok);

    spec.expected_exit_codes = {0, 7};
    auto res2 = execute(spec);
    CHECK(res2.exit_ok);
}

TEST_CASE("a command exceeding its timeout is killed") {
    ExecSpec spec;
    spec.command = "sleep 30; echo wordopt-timeout-marker";
    spec.timeout_s = 0.2;
    CHECK_THROWS_AS(execute(spec), ExecError);

    // the process group is gone afterward; [m] keeps the probe from
    // matching its own command line
    ExecSpec probe;
    probe.command = "pgrep -f 'wordopt-timeout-[m]arker' | wc -l";
    auto res = execute(probe);
    CHECK(res.out == "0\n");
}

TEST_CASE("environment is an explicit allowlist plus overrides") {
    setenv("WORDOPT_SECRET_TEST_VAR", "leaky", 1);
    ExecSpec spec;
    spec.command = "echo [${WORDOPT_SECRET_TEST_VAR}]";
    auto res = execute(spec);
    CHECK(res.out == "[]\n");  // parent variable must not leak through

    spec.env["WORDOPT_SECRET_TEST_VAR"] = "explicit";
    auto res2 = execute(spec);
    CHECK(res2.out == "[explicit]\n");
    unsetenv("WORDOPT_SECRET_TEST_VAR");
}

TEST_CASE("workdir is honored") {
    ExecSpec spec;
    spec.command = "pwd";
    spec.workdir = "/tmp";
    auto res = execute(spec);
    CHECK(res.out == "/tmp\n");
}
