#include "wordopt/transport.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <condition_variable>
#include <cstring>
#include <mutex>

#include "wordopt/errors.hpp"
#include "wordopt/strings.hpp"

namespace wordopt {

namespace {

constexpr std::size_t kMaxFrame = 64ull << 20;
constexpr std::size_t kHeader = 9;  // kind byte + job id

void put_u32_be(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(std::uint8_t(v >> 24));
    out.push_back(std::uint8_t(v >> 16));
    out.push_back(std::uint8_t(v >> 8));
    out.push_back(std::uint8_t(v));
}

void put_u64_be(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8) out.push_back(std::uint8_t(v >> shift));
}

std::uint32_t get_u32_be(const std::uint8_t* p) {
    return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) | (std::uint32_t(p[2]) << 8) |
           std::uint32_t(p[3]);
}

std::uint64_t get_u64_be(const std::uint8_t* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | p[i];
    return v;
}

void write_all(int fd, const std::uint8_t* data, std::size_t size) {
    while (size > 0) {
        const ssize_t wrote = ::write(fd, data, size);
        if (wrote < 0) {
            if (errno == EINTR) continue;
            throw TransportError(std::string("socket write failed: ") + std::strerror(errno));
        }
        data += wrote;
        size -= std::size_t(wrote);
    }
}

}  // namespace

const char* msg_kind_name(MsgKind k) {
    switch (k) {
        case MsgKind::task: return "TASK";
        case MsgKind::result: return "RESULT";
        case MsgKind::spawn: return "SPAWN";
        case MsgKind::shutdown: return "SHUTDOWN";
        case MsgKind::heartbeat: return "HEARTBEAT";
        case MsgKind::error: return "ERROR";
    }
    return "?";
}

Message Message::text(MsgKind kind, std::uint64_t job_id, std::string_view body) {
    Message m;
    m.kind = kind;
    m.job_id = job_id;
    m.payload.assign(body.begin(), body.end());
    return m;
}

std::vector<std::uint8_t> encode_message(const Message& m) {
    std::vector<std::uint8_t> out;
    out.reserve(4 + kHeader + m.payload.size());
    put_u32_be(out, std::uint32_t(kHeader + m.payload.size()));
    out.push_back(std::uint8_t(m.kind));
    put_u64_be(out, m.job_id);
    out.insert(out.end(), m.payload.begin(), m.payload.end());
    return out;
}

void FrameDecoder::feed(const std::uint8_t* data, std::size_t size) {
    if (consumed_ > 0 && consumed_ == buf_.size()) {
        buf_.clear();
        consumed_ = 0;
    }
    buf_.insert(buf_.end(), data, data + size);
}

std::optional<Message> FrameDecoder::next() {
    const std::size_t available = buf_.size() - consumed_;
    if (available < 4) return std::nullopt;
    const std::uint8_t* base = buf_.data() + consumed_;
    const std::uint32_t length = get_u32_be(base);
    if (length < kHeader || length > kMaxFrame)
        throw DecodeError("transport: bad frame length " + std::to_string(length));
    if (available < 4 + std::size_t(length)) return std::nullopt;

    Message m;
    const std::uint8_t kind = base[4];
    if (kind < 1 || kind > 6)
        throw DecodeError("transport: unknown message kind " + std::to_string(int(kind)));
    m.kind = MsgKind(kind);
    m.job_id = get_u64_be(base + 5);
    m.payload.assign(base + 4 + kHeader, base + 4 + length);
    consumed_ += 4 + std::size_t(length);
    if (consumed_ == buf_.size()) {
        buf_.clear();
        consumed_ = 0;
    } else if (consumed_ > (1u << 20)) {
        buf_.erase(buf_.begin(), buf_.begin() + std::ptrdiff_t(consumed_));
        consumed_ = 0;
    }
    return m;
}

void MasterLink::broadcast(const Message& m) {
    for (std::size_t w = 0; w < worker_count(); ++w) send(w, m);
}

void MasterLink::shutdown_workers() {
    broadcast(Message{MsgKind::shutdown, 0, {}});
}

// ---------------------------------------------------------------- in-process

struct InProcHub::State {
    struct Box {
        std::deque<Message> queue;
        bool closed = false;
    };
    std::mutex mutex;
    std::condition_variable master_cv;
    std::condition_variable worker_cv;
    std::vector<Box> to_worker;
    std::deque<std::pair<std::size_t, Message>> to_master;
};

namespace {

class InProcMaster final : public MasterLink {
  public:
    explicit InProcMaster(std::shared_ptr<InProcHub::State> state) : state_(std::move(state)) {}

    std::size_t worker_count() const override { return state_->to_worker.size(); }

    void send(std::size_t worker, const Message& m) override {
        std::lock_guard lock(state_->mutex);
        state_->to_worker.at(worker).queue.push_back(m);
        state_->worker_cv.notify_all();
    }

    std::optional<std::pair<std::size_t, Message>> recv(std::chrono::milliseconds timeout) override {
        std::unique_lock lock(state_->mutex);
        if (!state_->master_cv.wait_for(lock, timeout, [&] { return !state_->to_master.empty(); }))
            return std::nullopt;
        auto m = std::move(state_->to_master.front());
        state_->to_master.pop_front();
        return m;
    }

  private:
    std::shared_ptr<InProcHub::State> state_;
};

class InProcWorker final : public WorkerLink {
  public:
    InProcWorker(std::shared_ptr<InProcHub::State> state, std::size_t index)
        : state_(std::move(state)), index_(index) {}

    void send(const Message& m) override {
        std::lock_guard lock(state_->mutex);
        state_->to_master.emplace_back(index_, m);
        state_->master_cv.notify_all();
    }

    std::optional<Message> recv(std::chrono::milliseconds timeout) override {
        std::unique_lock lock(state_->mutex);
        auto& box = state_->to_worker.at(index_);
        if (!state_->worker_cv.wait_for(lock, timeout, [&] { return !box.queue.empty(); }))
            return std::nullopt;
        Message m = std::move(box.queue.front());
        box.queue.pop_front();
        return m;
    }

  private:
    std::shared_ptr<InProcHub::State> state_;
    std::size_t index_;
};

}  // namespace

InProcHub::InProcHub(std::size_t workers) : state_(std::make_shared<State>()) {
    state_->to_worker.resize(workers);
    master_ = std::make_unique<InProcMaster>(state_);
}

InProcHub::~InProcHub() = default;

MasterLink& InProcHub::master() {
    return *master_;
}

std::unique_ptr<WorkerLink> InProcHub::worker(std::size_t index) {
    if (index >= state_->to_worker.size()) throw ContractError("InProcHub: worker index out of range");
    return std::make_unique<InProcWorker>(state_, index);
}

// -------------------------------------------------------------------- socket

std::pair<std::string, std::uint16_t> parse_address(const std::string& address) {
    const auto colon = address.rfind(':');
    if (colon == std::string::npos || colon == 0)
        throw ConfigError("address must be host:port, got '" + address + "'");
    const auto port = parse_uint(address.substr(colon + 1));
    if (!port || *port > 65535)
        throw ConfigError("bad port in address '" + address + "'");
    return {address.substr(0, colon), std::uint16_t(*port)};
}

struct SocketMasterLink::Conn {
    int fd = -1;
    FrameDecoder decoder;
    bool open = true;
};

SocketMasterLink::SocketMasterLink(const std::string& address) {
    const auto [host, port] = parse_address(address);
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) throw TransportError("socket() failed");
    fcntl(listen_fd_, F_SETFD, FD_CLOEXEC);
    const int one = 1;
    setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1)
        throw ConfigError("bad IPv4 host '" + host + "'");
    if (bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0)
        throw TransportError("bind failed on " + address + ": " + std::strerror(errno));
    if (listen(listen_fd_, 64) != 0) throw TransportError("listen failed");
    sockaddr_in actual{};
    socklen_t len = sizeof(actual);
    getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&actual), &len);
    char buf[32];
    inet_ntop(AF_INET, &actual.sin_addr, buf, sizeof(buf));
    address_ = std::string(buf) + ":" + std::to_string(ntohs(actual.sin_port));
}

SocketMasterLink::~SocketMasterLink() {
    for (auto& c : conns_)
        if (c->fd >= 0) close(c->fd);
    if (listen_fd_ >= 0) close(listen_fd_);
}

void SocketMasterLink::await_workers(std::size_t count, std::chrono::milliseconds timeout) {
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    while (conns_.size() < count) {
        if (std::chrono::steady_clock::now() >= deadline)
            throw TransportError("timed out waiting for " + std::to_string(count) + " workers (" +
                                 std::to_string(conns_.size()) + " connected)");
        poll_once(50);
    }
}

std::size_t SocketMasterLink::worker_count() const {
    return conns_.size();
}

void SocketMasterLink::send(std::size_t worker, const Message& m) {
    auto& conn = *conns_.at(worker);
    if (!conn.open) throw TransportError("worker " + std::to_string(worker) + " is disconnected");
    const auto bytes = encode_message(m);
    write_all(conn.fd, bytes.data(), bytes.size());
}

void SocketMasterLink::poll_once(int wait_ms) {
    std::vector<pollfd> fds;
    fds.push_back({listen_fd_, POLLIN, 0});
    for (const auto& c : conns_) fds.push_back({c->open ? c->fd : -1, POLLIN, 0});
    const int ready = ::poll(fds.data(), fds.size(), wait_ms);
    if (ready <= 0) return;

    if (fds[0].revents & POLLIN) {
        const int fd = accept(listen_fd_, nullptr, nullptr);
        if (fd >= 0) {
            fcntl(fd, F_SETFD, FD_CLOEXEC);
            const int one = 1;
            setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
            auto conn = std::make_unique<Conn>();
            conn->fd = fd;
            conns_.push_back(std::move(conn));
        }
    }
    for (std::size_t i = 0; i + 1 < fds.size(); ++i) {
        if (!(fds[i + 1].revents & (POLLIN | POLLHUP))) continue;
        auto& conn = *conns_[i];
        std::uint8_t buf[16384];
        const ssize_t got = ::read(conn.fd, buf, sizeof(buf));
        if (got > 0) {
            conn.decoder.feed(buf, std::size_t(got));
            while (auto m = conn.decoder.next()) inbox_.emplace_back(i, std::move(*m));
        } else if (got == 0 || (got < 0 && errno != EAGAIN && errno != EINTR)) {
            close(conn.fd);
            conn.open = false;
        }
    }
}

std::optional<std::pair<std::size_t, Message>> SocketMasterLink::recv(
    std::chrono::milliseconds timeout) {
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    for (;;) {
        if (!inbox_.empty()) {
            auto m = std::move(inbox_.front());
            inbox_.pop_front();
            return m;
        }
        const auto now = std::chrono::steady_clock::now();
        if (now >= deadline) return std::nullopt;
        const auto left =
            std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
        poll_once(int(std::min<long long>(left, 100)));
    }
}

SocketWorkerLink::SocketWorkerLink(const std::string& address) {
    const auto [host, port] = parse_address(address);
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd_ < 0) throw TransportError("socket() failed");
    fcntl(fd_, F_SETFD, FD_CLOEXEC);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1)
        throw ConfigError("bad IPv4 host '" + host + "'");
    if (connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
        close(fd_);
        fd_ = -1;
        throw TransportError("connect to " + address + " failed: " + std::strerror(errno));
    }
    const int one = 1;
    setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

SocketWorkerLink::~SocketWorkerLink() {
    if (fd_ >= 0) close(fd_);
}

void SocketWorkerLink::send(const Message& m) {
    const auto bytes = encode_message(m);
    write_all(fd_, bytes.data(), bytes.size());
}

std::optional<Message> SocketWorkerLink::recv(std::chrono::milliseconds timeout) {
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    for (;;) {
        if (!inbox_.empty()) {
            Message m = std::move(inbox_.front());
            inbox_.pop_front();
            return m;
        }
        const auto now = std::chrono::steady_clock::now();
        if (now >= deadline) return std::nullopt;
        const auto left =
            std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
        pollfd pfd{fd_, POLLIN, 0};
        const int ready = ::poll(&pfd, 1, int(std::min<long long>(left, 100)));
        if (ready <= 0) continue;
        std::uint8_t buf[16384];
        const ssize_t got = ::read(fd_, buf, sizeof(buf));
        if (got > 0) {
            decoder_.feed(buf, std::size_t(got));
            while (auto m = decoder_.next()) inbox_.push_back(std::move(*m));
        } else if (got == 0) {
            throw TransportError("master closed the connection");
        } else if (errno != EAGAIN && errno != EINTR) {
            throw TransportError(std::string("socket read failed: ") + std::strerror(errno));
        }
    }
}

}  // namespace wordopt
