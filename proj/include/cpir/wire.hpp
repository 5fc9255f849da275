#pragma once

#include <atomic>
#include <cstdint>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "cpir/pir.hpp"

namespace cpir {
namespace wire {

inline constexpr uint8_t kVersion = 1;

inline constexpr uint8_t kFrameQuery = 1;
inline constexpr uint8_t kFrameResponse = 2;
inline constexpr uint8_t kFrameError = 3;
inline constexpr uint8_t kFrameParamsProbe = 4;
inline constexpr uint8_t kFrameParamsInfo = 5;

inline constexpr uint16_t kErrDimensionMismatch = 1;
inline constexpr uint16_t kErrBadMagic = 2;
inline constexpr uint16_t kErrUnsupportedVersion = 3;
inline constexpr uint16_t kErrParamMismatch = 4;

/// One length-prefixed message: u32 LE payload size, u8 kind, payload.
struct Frame {
    uint8_t kind = 0;
    std::string payload;
};

// ---- byte-level encodings ------------------------------------------------

std::string encode_field_spec(const ExtField& f);
ExtField decode_field_spec(const std::string& bytes, size_t& offset);

std::string encode_query(const Query& q, const ExtField& f);
/// Returns the query and the field carried in its header.
std::pair<Query, ExtField> decode_query(const std::string& bytes);

std::string encode_response(const Response& r, const ExtField& f);
std::pair<Response, ExtField> decode_response(const std::string& bytes);

std::string encode_database(const Database& db);
Database decode_database(const std::string& bytes);

std::string encode_secret(const QuerySecret& secret);
QuerySecret decode_secret(const std::string& bytes);

/// Matrix payload size of a serialized query/response in bytes, excluding
/// all headers: one byte per base-field coefficient.
uint64_t query_payload_bytes(const SchemeParams& p);
uint64_t response_payload_bytes(const SchemeParams& p);
/// Byte offset of the matrix payload inside an encoded query/response.
uint64_t query_header_bytes(const SchemeParams& p);
uint64_t response_header_bytes(const SchemeParams& p);

std::string encode_error(uint16_t code, const std::string& message);
std::pair<uint16_t, std::string> decode_error(const std::string& bytes);

std::string encode_params_info(const SchemeParams& p);
SchemeParams decode_params_info(const std::string& bytes);

// ---- file helpers ----------------------------------------------------------

void write_file(const std::string& path, const std::string& bytes);
std::string read_file(const std::string& path);

// ---- framing over a socket -------------------------------------------------

void send_frame(int fd, const Frame& frame);
Frame recv_frame(int fd);

// ---- server / client -------------------------------------------------------

/// Serves respond(db, query) over length-prefixed frames. The database is
/// loaded once and shared read-only; each connection runs on its own
/// thread and malformed input gets an ERROR frame without taking the
/// server down.
class Server {
public:
    explicit Server(Database db);
    ~Server();

    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    /// Binds and starts the accept loop in the background. Pass port 0
    /// for an ephemeral port; the bound port is returned.
    uint16_t start(const std::string& address, uint16_t port);
    void stop();

    uint16_t port() const { return port_; }

private:
    void accept_loop();
    void handle_connection(int fd);

    Database db_;
    int listen_fd_ = -1;
    uint16_t port_ = 0;
    std::atomic<bool> stopping_{false};
    std::thread accept_thread_;
    std::mutex state_mutex_;
    std::vector<std::thread> workers_;
    std::vector<int> open_fds_;
};

/// Sends the query and returns the decoded response. Throws
/// ConnectionFailed when the server is unreachable and ServerError when
/// the server replies with an ERROR frame.
Response fetch(const std::string& address, uint16_t port, const Query& query,
               const ExtField& field);

} // namespace wire
} // namespace cpir
