#ifndef WORDOPT_TRANSPORT_HPP
#define WORDOPT_TRANSPORT_HPP

#include <chrono>
#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace wordopt {

// Message kinds on the wire. The byte values are part of the format.
enum class MsgKind : std::uint8_t {
    task = 1,
    result = 2,
    spawn = 3,
    shutdown = 4,
    heartbeat = 5,
    error = 6,
};

const char* msg_kind_name(MsgKind k);

struct Message {
    MsgKind kind = MsgKind::heartbeat;
    std::uint64_t job_id = 0;
    std::vector<std::uint8_t> payload;

    static Message text(MsgKind kind, std::uint64_t job_id, std::string_view body);
    std::string payload_text() const { return std::string(payload.begin(), payload.end()); }
};

// Wire format, bit-exact: 4-byte big-endian length, 1 message-kind byte,
// 8-byte big-endian job id, payload. The length counts kind + job id +
// payload (9 + payload size).
std::vector<std::uint8_t> encode_message(const Message& m);

// Incremental decoder for stream transports; frames larger than 64 MiB or
// shorter than a header raise DecodeError.
class FrameDecoder {
  public:
    void feed(const std::uint8_t* data, std::size_t size);
    std::optional<Message> next();

  private:
    std::vector<std::uint8_t> buf_;
    std::size_t consumed_ = 0;
};

// Star-topology endpoints. The master is single-threaded over its side;
// worker links are owned by one worker each. Messages arrive intact and in
// per-sender order or the call throws TransportError; nothing is dropped
// silently.
class MasterLink {
  public:
    virtual ~MasterLink() = default;
    virtual std::size_t worker_count() const = 0;
    virtual void send(std::size_t worker, const Message& m) = 0;
    virtual std::optional<std::pair<std::size_t, Message>> recv(
        std::chrono::milliseconds timeout) = 0;

    void broadcast(const Message& m);
    /// SHUTDOWN to every worker.
    void shutdown_workers();
};

class WorkerLink {
  public:
    virtual ~WorkerLink() = default;
    virtual void send(const Message& m) = 0;
    virtual std::optional<Message> recv(std::chrono::milliseconds timeout) = 0;
};

// In-process transport: lock-guarded queues, no sockets; lets the whole
// distributed stack run inside one test process.
class InProcHub {
  public:
    explicit InProcHub(std::size_t workers);
    ~InProcHub();

    MasterLink& master();
    std::unique_ptr<WorkerLink> worker(std::size_t index);

  private:
    struct State;
    std::shared_ptr<State> state_;
    std::unique_ptr<MasterLink> master_;
};

// TCP transport on localhost (or any IPv4 address), framed with the wire
// format above. Workers connect to the master's listening address; the
// arrival order fixes their indices.
class SocketMasterLink final : public MasterLink {
  public:
    /// Binds host:port; port 0 picks a free one.
    explicit SocketMasterLink(const std::string& address = "127.0.0.1:0");
    ~SocketMasterLink() override;

    std::string address() const { return address_; }

    /// Accepts connections until `count` workers are attached.
    void await_workers(std::size_t count, std::chrono::milliseconds timeout);

    std::size_t worker_count() const override;
    void send(std::size_t worker, const Message& m) override;
    std::optional<std::pair<std::size_t, Message>> recv(std::chrono::milliseconds timeout) override;

  private:
    struct Conn;
    void poll_once(int wait_ms);

    int listen_fd_ = -1;
    std::string address_;
    std::vector<std::unique_ptr<Conn>> conns_;
    std::deque<std::pair<std::size_t, Message>> inbox_;
};

class SocketWorkerLink final : public WorkerLink {
  public:
    explicit SocketWorkerLink(const std::string& address);
    ~SocketWorkerLink() override;

    void send(const Message& m) override;
    std::optional<Message> recv(std::chrono::milliseconds timeout) override;

  private:
    int fd_ = -1;
    FrameDecoder decoder_;
    std::deque<Message> inbox_;
};

/// Splits "host:port"; throws ConfigError on malformed addresses.
std::pair<std::string, std::uint16_t> parse_address(const std::string& address);

}  // namespace wordopt

#endif
