#include "wordopt/distributed.hpp"

#include <algorithm>

#include "wordopt/errors.hpp"
#include "wordopt/logging.hpp"

namespace wordopt {

WorkerStats worker_loop(WorkerLink& link, const HandlerMap& handlers) {
    WorkerStats stats;
    for (;;) {
        auto msg = link.recv(std::chrono::milliseconds(200));
        if (!msg) continue;
        if (msg->kind == MsgKind::shutdown) {
            log_info("worker", msg->job_id, "shutdown received, exiting");
            return stats;
        }
        if (msg->kind == MsgKind::heartbeat && !handlers.count(MsgKind::heartbeat)) {
            link.send(Message{MsgKind::heartbeat, msg->job_id, msg->payload});
            continue;
        }
        const auto it = handlers.find(msg->kind);
        if (it == handlers.end()) {
            link.send(Message::text(MsgKind::error, msg->job_id,
                                    std::string("no handler for ") + msg_kind_name(msg->kind)));
            stats.errors += 1;
            continue;
        }
        try {
            Message reply;
            reply.kind = MsgKind::result;
            reply.job_id = msg->job_id;
            reply.payload = it->second(*msg);
            link.send(reply);
            stats.handled += 1;
        } catch (const std::exception& e) {
            log_error("worker", msg->job_id, std::string("task failed: ") + e.what());
            link.send(Message::text(MsgKind::error, msg->job_id, e.what()));
            stats.errors += 1;
        }
    }
}

StateToken merge_min_best(const std::vector<StateToken>& tokens) {
    if (tokens.empty()) throw ContractError("merge: no tokens");
    const StateToken* best = &tokens.front();
    for (const auto& t : tokens)
        if (t.best_score < best->best_score) best = &t;  // strict: ties keep the lowest index
    return *best;
}

std::vector<StateToken> master_run_all(const std::vector<std::vector<std::uint8_t>>& tasks,
                                       MasterLink& link, const MasterOptions& options) {
    if (tasks.empty()) throw ContractError("master_run: no tasks");
    if (link.worker_count() == 0) throw TransportError("master_run: pool has no workers");

    struct Slot {
        bool done = false;
        bool retried = false;
        std::size_t worker = 0;
        std::chrono::steady_clock::time_point sent;
        StateToken token;
    };
    std::vector<Slot> slots(tasks.size());

    const auto dispatch = [&](std::size_t task, std::size_t worker) {
        Message m;
        m.kind = MsgKind::task;
        m.job_id = task;
        m.payload = tasks[task];
        slots[task].worker = worker;
        slots[task].sent = std::chrono::steady_clock::now();
        link.send(worker, m);
        log_info("master", task, "dispatched to worker " + std::to_string(worker));
    };

    const auto redispatch_or_fail = [&](std::size_t task, const std::string& why) {
        auto& slot = slots[task];
        if (slot.retried) {
            std::string completed;
            for (std::size_t t = 0; t < slots.size(); ++t)
                if (slots[t].done) completed += (completed.empty() ? "" : ",") + std::to_string(t);
            throw TransportError("task " + std::to_string(task) + " failed twice (" + why +
                                 "); completed job_ids: [" + completed + "]");
        }
        slot.retried = true;
        dispatch(task, (slot.worker + 1) % link.worker_count());
        log_warn("master", task, "re-dispatched after " + why);
    };

    for (std::size_t t = 0; t < tasks.size(); ++t) dispatch(t, t % link.worker_count());

    std::size_t remaining = tasks.size();
    while (remaining > 0) {
        auto got = link.recv(std::chrono::milliseconds(50));
        if (got) {
            const auto& [worker, msg] = *got;
            if (msg.job_id >= slots.size()) continue;
            auto& slot = slots[msg.job_id];
            if (msg.kind == MsgKind::result) {
                if (!slot.done) {
                    slot.token = token_restore(msg.payload);
                    slot.done = true;
                    remaining -= 1;
                    log_info("master", msg.job_id, "result from worker " + std::to_string(worker));
                }
            } else if (msg.kind == MsgKind::error) {
                if (!slot.done) redispatch_or_fail(msg.job_id, "worker error: " + msg.payload_text());
            }
            continue;
        }
        // no message: check for timed-out tasks
        const auto now = std::chrono::steady_clock::now();
        for (std::size_t t = 0; t < slots.size(); ++t) {
            if (slots[t].done) continue;
            if (now - slots[t].sent > options.task_timeout)
                redispatch_or_fail(t, "timeout");
        }
    }

    std::vector<StateToken> out;
    out.reserve(slots.size());
    for (auto& s : slots) out.push_back(std::move(s.token));
    return out;
}

StateToken master_run(const std::vector<std::vector<std::uint8_t>>& tasks, MasterLink& link,
                      const MergeRule& merge, const MasterOptions& options) {
    const auto results = master_run_all(tasks, link, options);
    return (merge ? merge : MergeRule(merge_min_best))(results);
}

}  // namespace wordopt
