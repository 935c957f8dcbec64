#ifndef WORDOPT_DISTRIBUTED_HPP
#define WORDOPT_DISTRIBUTED_HPP

#include <functional>
#include <map>

#include "wordopt/token.hpp"
#include "wordopt/transport.hpp"

namespace wordopt {

// Handler invoked for one inbound message; the returned bytes go back as the
// RESULT payload with the same job id. Exceptions become ERROR messages.
using TaskHandler = std::function<std::vector<std::uint8_t>(const Message&)>;
using HandlerMap = std::map<MsgKind, TaskHandler>;

struct WorkerStats {
    std::uint64_t handled = 0;
    std::uint64_t errors = 0;
};

/// Message-driven worker: dispatches by kind until SHUTDOWN, answering
/// HEARTBEAT automatically. Handler exceptions are reported as ERROR
/// messages, never silent death.
WorkerStats worker_loop(WorkerLink& link, const HandlerMap& handlers);

struct MasterOptions {
    std::chrono::milliseconds task_timeout{60000};
    // One re-dispatch per task; a second failure aborts with the list of
    // completed job ids.
};

using MergeRule = std::function<StateToken(const std::vector<StateToken>&)>;

/// Default reduction: the token with minimum best_score, ties by lowest task
/// index.
StateToken merge_min_best(const std::vector<StateToken>& tokens);

/// Task farm: round-robin dispatch of task payloads (job id = task index),
/// one re-dispatch per timed-out or failed task, deterministic merge of the
/// restored result tokens. The merged result does not depend on worker
/// scheduling or arrival order.
StateToken master_run(const std::vector<std::vector<std::uint8_t>>& tasks, MasterLink& link,
                      const MergeRule& merge = merge_min_best,
                      const MasterOptions& options = {});

/// Same farm, returning every task's result token (task-index order).
std::vector<StateToken> master_run_all(const std::vector<std::vector<std::uint8_t>>& tasks,
                                       MasterLink& link, const MasterOptions& options = {});

}  // namespace wordopt

#endif
