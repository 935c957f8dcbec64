#ifndef WORDOPT_RUNNER_HPP
#define WORDOPT_RUNNER_HPP

#include <filesystem>
#include <optional>

#include "wordopt/distributed.hpp"
#include "wordopt/registry.hpp"
#include "wordopt/report.hpp"

namespace wordopt {

// Orchestration: spec -> problem -> metaheuristic run, with reporting,
// checkpointing, resuming, and the worker-side task protocol.

struct RunOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> checkpoint_every;
    std::optional<std::string> checkpoint_path;
    std::optional<std::string> pool;
    std::optional<std::string> report_dir;
};

struct RunOutcome {
    RunResult result;
    RunReport report;
    std::filesystem::path report_dir;
};

/// Seed precedence: override, then spec, then WORDOPT_SEED, then 0. Pool
/// precedence: override, then spec, then WORDOPT_POOL (config wins over
/// environment).
std::uint64_t resolve_seed(const ProblemSpec& spec, const RunOverrides& o);
std::string resolve_pool(const ProblemSpec& spec, const RunOverrides& o);

/// Full run with report emission; checkpoints are written atomically when
/// configured.
RunOutcome run_from_spec(const ProblemSpec& spec, const RunOverrides& o = {});

/// Continues a run from a checkpoint document produced by run_from_spec.
RunOutcome resume_run(const std::string& checkpoint_document, const RunOverrides& o = {});

/// Dispatches to the named metaheuristic (registry resolution) without any
/// file I/O; the building block shared by run/resume/workers.
RunResult dispatch_metaheuristic(const Problem& problem, const ProblemSpec& spec,
                                 std::uint64_t seed, const RunHooks& hooks);

// Worker task protocol: a TASK payload is a JSON document
//   {"format":"wordopt.task","version":1,"spec":"<spec xml/json>","seed":N,
//    "mh":<optional name override>,"mh_params":{...optional...},
//    "token":{...optional resume token...}}
// and the RESULT payload is the checkpoint bytes of the finished token.
std::vector<std::uint8_t> make_task_payload(const std::string& spec_document, std::uint64_t seed,
                                            const std::string& mh_override = "",
                                            const ParamMap& mh_params = {},
                                            const StateToken* token = nullptr);

std::vector<std::uint8_t> handle_task_payload(const Message& task);

/// The handler map workers run with.
HandlerMap worker_handlers();

// The SA + parallel-descent composition: every accepted candidate is
// broadcast to descent_width workers running seeded greedy descents; the best
// descended token becomes the new current. With descent_cap 0 the composition
// degenerates to plain SA, trace-identical per seed. Pool synchronization
// (heartbeats) happens at plateau boundaries.
struct BasinHoppingParams {
    SAParams sa;
    std::uint64_t descent_width = 2;
    std::uint64_t rounds = 0;  // plateau cap; 0 = until the SA stop rules fire
    std::uint64_t descent_cap = 200;
    std::uint64_t descent_stall = 50;

    static BasinHoppingParams from_params(const ParamMap& p);
};

RunResult run_basin_hopping(const Problem& problem, const ProblemSpec& spec,
                            const BasinHoppingParams& params, std::uint64_t seed,
                            const RunHooks& hooks = {}, MasterLink* pool = nullptr);

}  // namespace wordopt

#endif
