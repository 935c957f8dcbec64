#include "wordopt/factory.hpp"

#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <map>

#include "wordopt/errors.hpp"
#include "wordopt/logging.hpp"
#include "wordopt/strings.hpp"

namespace wordopt {

namespace {

std::string self_executable() {
    char buf[4096];
    const ssize_t n = readlink("/proc/self/exe", buf, sizeof(buf) - 1);
    if (n <= 0) throw ExecError("factory: cannot resolve own executable path");
    return std::string(buf, std::size_t(n));
}

std::vector<std::string> split_command(const std::string& command) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : command) {
        if (c == ' ') {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

pid_t spawn_worker(const std::string& command_template, const std::string& master) {
    std::string cmd = command_template;
    const std::string key = "{master}";
    for (auto at = cmd.find(key); at != std::string::npos; at = cmd.find(key))
        cmd.replace(at, key.size(), master);
    const auto argv_strings = split_command(cmd);
    if (argv_strings.empty()) throw ConfigError("factory: empty worker command");

    const pid_t pid = fork();
    if (pid < 0) throw ExecError("factory: fork failed");
    if (pid == 0) {
        setpgid(0, 0);
        std::vector<char*> argv;
        for (const auto& a : argv_strings) argv.push_back(const_cast<char*>(a.c_str()));
        argv.push_back(nullptr);
        execv(argv[0], argv.data());
        _exit(127);
    }
    return pid;
}

struct Pool {
    std::uint64_t id = 0;
    std::vector<pid_t> pids;
    std::chrono::steady_clock::time_point last_touch;
};

struct FactoryState {
    std::map<std::uint64_t, Pool> pools;
    std::uint64_t next_id = 1;

    nlohmann::json status() const {
        nlohmann::json j;
        auto& arr = j["pools"] = nlohmann::json::array();
        for (const auto& [id, pool] : pools) {
            nlohmann::json p;
            p["id"] = id;
            p["workers"] = pool.pids.size();
            p["pids"] = pool.pids;
            arr.push_back(std::move(p));
        }
        return j;
    }

    void reap_exited() {
        int status = 0;
        pid_t pid;
        while ((pid = waitpid(-1, &status, WNOHANG)) > 0) {
            for (auto& [id, pool] : pools)
                std::erase(pool.pids, pid);
        }
        std::erase_if(pools, [](const auto& kv) { return kv.second.pids.empty(); });
    }

    void release(std::uint64_t id) {
        const auto it = pools.find(id);
        if (it == pools.end()) return;
        for (pid_t pid : it->second.pids) kill(-pid, SIGTERM);
        const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(2);
        for (pid_t pid : it->second.pids) {
            int status = 0;
            while (waitpid(pid, &status, WNOHANG) == 0) {
                if (std::chrono::steady_clock::now() > deadline) {
                    kill(-pid, SIGKILL);
                    waitpid(pid, &status, 0);
                    break;
                }
                usleep(10000);
            }
        }
        pools.erase(it);
        log_info("factory", id, "pool released");
    }

    void release_all() {
        while (!pools.empty()) release(pools.begin()->first);
    }
};

}  // namespace

void run_factory_server(const FactoryOptions& options,
                        const std::function<void(const std::string&)>& ready) {
    SocketMasterLink control(options.address);
    log_info("factory", 0, "listening on " + control.address());
    if (ready) ready(control.address());

    const std::string worker_command =
        options.worker_command.empty() ? self_executable() + " worker join {master}"
                                       : options.worker_command;
    FactoryState state;

    for (;;) {
        auto got = control.recv(std::chrono::milliseconds(200));
        state.reap_exited();

        // orphan reaping: pools nobody has touched for a while
        const auto now = std::chrono::steady_clock::now();
        std::vector<std::uint64_t> stale;
        for (const auto& [id, pool] : state.pools)
            if (std::chrono::duration<double>(now - pool.last_touch).count() >
                options.reap_interval_s)
                stale.push_back(id);
        for (auto id : stale) {
            log_warn("factory", id, "reaping orphaned pool (heartbeat timeout)");
            state.release(id);
        }

        if (!got) continue;
        const auto& [client, msg] = *got;
        switch (msg.kind) {
            case MsgKind::spawn: {
                try {
                    const auto req = nlohmann::json::parse(msg.payload_text());
                    const std::size_t workers = req.at("workers").get<std::size_t>();
                    const std::string master = req.at("master").get<std::string>();
                    if (workers < 1) throw ConfigError("factory: worker count must be >= 1");
                    Pool pool;
                    pool.id = state.next_id++;
                    pool.last_touch = std::chrono::steady_clock::now();
                    for (std::size_t i = 0; i < workers; ++i)
                        pool.pids.push_back(spawn_worker(worker_command, master));
                    nlohmann::json reply;
                    reply["pool_id"] = pool.id;
                    reply["pids"] = pool.pids;
                    log_info("factory", pool.id,
                             "spawned " + std::to_string(workers) + " workers for " + master);
                    state.pools.emplace(pool.id, std::move(pool));
                    control.send(client,
                                 Message::text(MsgKind::result, msg.job_id, reply.dump()));
                } catch (const std::exception& e) {
                    log_error("factory", msg.job_id, std::string("spawn failed: ") + e.what());
                    control.send(client, Message::text(MsgKind::error, msg.job_id, e.what()));
                }
                break;
            }
            case MsgKind::shutdown: {
                if (msg.job_id == 0) {
                    state.release_all();
                    control.send(client, Message::text(MsgKind::result, 0, "bye"));
                    log_info("factory", 0, "shutdown");
                    return;
                }
                state.release(msg.job_id);
                control.send(client, Message::text(MsgKind::result, msg.job_id, "released"));
                break;
            }
            case MsgKind::heartbeat: {
                if (auto it = state.pools.find(msg.job_id); it != state.pools.end())
                    it->second.last_touch = std::chrono::steady_clock::now();
                control.send(client,
                             Message::text(MsgKind::heartbeat, msg.job_id, state.status().dump()));
                break;
            }
            default:
                control.send(client, Message::text(MsgKind::error, msg.job_id,
                                                   "factory: unexpected message kind"));
        }
    }
}

FactoryClient::FactoryClient(const std::string& address) : address_(address), link_(address) {}

Message FactoryClient::request(const Message& m, std::chrono::milliseconds timeout) {
    link_.send(m);
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    for (;;) {
        const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
            deadline - std::chrono::steady_clock::now());
        if (left.count() <= 0) throw TransportError("factory request timed out");
        auto reply = link_.recv(left);
        if (!reply) throw TransportError("factory request timed out");
        if (reply->job_id != m.job_id) continue;  // stale reply
        if (reply->kind == MsgKind::error)
            throw TransportError("factory error: " + reply->payload_text());
        return *reply;
    }
}

WorkerPoolHandle FactoryClient::spawn(std::size_t workers, const std::string& master_address) {
    nlohmann::json req;
    req["workers"] = workers;
    req["master"] = master_address;
    const auto reply =
        request(Message::text(MsgKind::spawn, nonce_++, req.dump()), std::chrono::seconds(30));
    const auto body = nlohmann::json::parse(reply.payload_text());
    WorkerPoolHandle handle;
    handle.pool_id = body.at("pool_id").get<std::uint64_t>();
    handle.pids = body.at("pids").get<std::vector<int>>();
    handle.worker_count = handle.pids.size();
    handle.factory_address = address_;
    return handle;
}

void FactoryClient::release(const WorkerPoolHandle& handle) {
    request(Message{MsgKind::shutdown, handle.pool_id, {}}, std::chrono::seconds(30));
}

nlohmann::json FactoryClient::status() {
    const auto reply =
        request(Message{MsgKind::heartbeat, 0, {}}, std::chrono::seconds(10));
    return nlohmann::json::parse(reply.payload_text());
}

void FactoryClient::shutdown() {
    request(Message{MsgKind::shutdown, 0, {}}, std::chrono::seconds(30));
}

}  // namespace wordopt
