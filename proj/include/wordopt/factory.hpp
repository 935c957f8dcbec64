#ifndef WORDOPT_FACTORY_HPP
#define WORDOPT_FACTORY_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wordopt/transport.hpp"

namespace wordopt {

// Standalone worker-pool factory: a singleton process listening on a control
// socket, spawning groups of worker processes on SPAWN and reaping them on
// release, shutdown, or heartbeat timeout.
//
// Control protocol (wordopt wire format over the control socket):
//   SPAWN     job_id=nonce  payload {"workers":N,"master":"host:port"}
//             -> RESULT {"pool_id":id,"pids":[...]} | ERROR text
//   SHUTDOWN  job_id=pool_id  releases that pool -> RESULT
//   SHUTDOWN  job_id=0        reaps everything, replies RESULT, exits
//   HEARTBEAT job_id=pool_id|0 -> HEARTBEAT with a status JSON payload
//             {"pools":[{"id":..,"workers":N,"pids":[..]}]}; also refreshes
//             the pool's orphan timer.

struct WorkerPoolHandle {
    std::uint64_t pool_id = 0;
    std::size_t worker_count = 0;
    std::vector<int> pids;
    std::string factory_address;
};

struct FactoryOptions {
    std::string address = "127.0.0.1:0";
    // Worker launch template, split on spaces; {master} is replaced by the
    // SPAWN request's master address. Empty: "<this executable> worker join
    // {master}".
    std::string worker_command;
    double reap_interval_s = 60.0;  // pools untouched this long are reaped
};

/// Serves the control loop until SHUTDOWN job 0. `ready` fires once with the
/// bound address.
void run_factory_server(const FactoryOptions& options,
                        const std::function<void(const std::string&)>& ready = {});

class FactoryClient {
  public:
    explicit FactoryClient(const std::string& address);

    WorkerPoolHandle spawn(std::size_t workers, const std::string& master_address);
    void release(const WorkerPoolHandle& handle);
    nlohmann::json status();
    void shutdown();

  private:
    Message request(const Message& m, std::chrono::milliseconds timeout);

    std::string address_;
    SocketWorkerLink link_;
    std::uint64_t nonce_ = 1;
};

}  // namespace wordopt

#endif
