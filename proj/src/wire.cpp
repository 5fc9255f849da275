#include "cpir/wire.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

namespace cpir {
namespace wire {

namespace {

constexpr uint64_t kMaxFrameBytes = uint64_t{1} << 30;

constexpr std::string_view kMagicQuery = "CPIRQRY";
constexpr std::string_view kMagicResponse = "CPIRRSP";
constexpr std::string_view kMagicDatabase = "CPIRDB";
constexpr std::string_view kMagicSecret = "CPIRSEC";
constexpr std::string_view kMagicField = "GF";

class Writer {
public:
    void u8(uint8_t v) { buf_.push_back(static_cast<char>(v)); }
    void u16(uint16_t v) {
        u8(static_cast<uint8_t>(v));
        u8(static_cast<uint8_t>(v >> 8));
    }
    void u32(uint32_t v) {
        for (int i = 0; i < 4; ++i) u8(static_cast<uint8_t>(v >> (8 * i)));
    }
    void u64(uint64_t v) {
        for (int i = 0; i < 8; ++i) u8(static_cast<uint8_t>(v >> (8 * i)));
    }
    void bytes(std::string_view v) { buf_.append(v); }
    std::string take() { return std::move(buf_); }

private:
    std::string buf_;
};

class Reader {
public:
    Reader(const std::string& buf, size_t offset = 0) : buf_(buf), pos_(offset) {}

    uint8_t u8() {
        need(1);
        return static_cast<uint8_t>(buf_[pos_++]);
    }
    uint16_t u16() {
        uint16_t lo = u8();
        return static_cast<uint16_t>(lo | (static_cast<uint16_t>(u8()) << 8));
    }
    uint32_t u32() {
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(u8()) << (8 * i);
        return v;
    }
    uint64_t u64() {
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(u8()) << (8 * i);
        return v;
    }
    std::string bytes(size_t count) {
        need(count);
        std::string out = buf_.substr(pos_, count);
        pos_ += count;
        return out;
    }
    void expect_magic(std::string_view magic, const char* what) {
        if (buf_.size() - pos_ < magic.size() ||
            std::string_view(buf_).substr(pos_, magic.size()) != magic)
            throw BadMagic(std::string("bad magic for ") + what);
        pos_ += magic.size();
    }
    size_t pos() const { return pos_; }
    size_t remaining() const { return buf_.size() - pos_; }

private:
    void need(size_t count) {
        if (buf_.size() - pos_ < count)
            throw DimensionMismatch("payload truncated");
    }

    const std::string& buf_;
    size_t pos_;
};

void write_params(Writer& w, const SchemeParams& p) {
    w.u32(p.q);
    w.u32(p.s);
    w.u32(p.v);
    w.u32(p.n);
    w.u32(p.k);
    w.u32(p.m);
    w.u32(p.big_l);
}

SchemeParams read_params(Reader& r) {
    SchemeParams p;
    p.q = r.u32();
    p.s = r.u32();
    p.v = r.u32();
    p.n = r.u32();
    p.k = r.u32();
    p.m = r.u32();
    p.big_l = r.u32();
    return p;
}

void write_field_spec(Writer& w, const ExtField& f) {
    w.bytes(kMagicField);
    w.u8(f.base().degree());
    // low byte of the modulus; the leading x^w term is implicit
    w.u8(static_cast<uint8_t>(f.base().modulus() & 0xff));
    w.u16(static_cast<uint16_t>(f.extension_degree()));
    for (uint8_t c : f.modulus()) w.u8(c);
}

ExtField read_field_spec(Reader& r) {
    r.expect_magic(kMagicField, "field spec");
    uint8_t w = r.u8();
    if (w < 1 || w > 8) throw DimensionMismatch("field degree out of range");
    uint8_t tail = r.u8();
    uint16_t modulus = static_cast<uint16_t>((uint16_t{1} << w) | tail);
    uint16_t s = r.u16();
    if (s < 1) throw DimensionMismatch("extension degree out of range");
    std::vector<uint8_t> ext_modulus(s + 1u);
    for (auto& c : ext_modulus) c = r.u8();
    try {
        return ExtField(BaseField(w, modulus), s, std::move(ext_modulus));
    } catch (const InvalidParams& e) {
        throw DimensionMismatch(std::string("invalid field spec: ") + e.what());
    }
}

void write_mat_base(Writer& w, const MatBase& m) {
    w.u32(m.rows);
    w.u32(m.cols);
    for (uint8_t e : m.a) w.u8(e);
}

MatBase read_mat_base(Reader& r, uint32_t q) {
    uint32_t rows = r.u32();
    uint32_t cols = r.u32();
    if (static_cast<uint64_t>(rows) * cols > kMaxFrameBytes)
        throw DimensionMismatch("matrix too large");
    MatBase m(rows, cols);
    for (auto& e : m.a) {
        e = r.u8();
        if (e >= q) throw DimensionMismatch("matrix entry out of field range");
    }
    return m;
}

void write_mat_ext(Writer& w, const MatExt& m, uint32_t s) {
    w.u32(m.rows);
    w.u32(m.cols);
    for (const auto& e : m.a) {
        if (e.coeffs.size() != s) throw DimensionMismatch("element degree mismatch");
        for (uint8_t c : e.coeffs) w.u8(c);
    }
}

MatExt read_mat_ext(Reader& r, uint32_t s, uint32_t q) {
    uint32_t rows = r.u32();
    uint32_t cols = r.u32();
    if (static_cast<uint64_t>(rows) * cols * s > kMaxFrameBytes)
        throw DimensionMismatch("matrix too large");
    MatExt m = MatExt::zeros(rows, cols, s);
    for (auto& e : m.a)
        for (uint32_t j = 0; j < s; ++j) {
            e.coeffs[j] = r.u8();
            if (e.coeffs[j] >= q) throw DimensionMismatch("matrix entry out of field range");
        }
    return m;
}

void check_version(uint8_t version) {
    if (version != kVersion)
        throw UnsupportedVersion("unsupported format version " + std::to_string(version));
}

void check_field_matches(const SchemeParams& p, const ExtField& f) {
    if (f.base().order() != p.q || f.extension_degree() != p.s)
        throw ParamMismatch("field spec disagrees with the parameter header");
}

} // namespace

std::string encode_field_spec(const ExtField& f) {
    Writer w;
    write_field_spec(w, f);
    return w.take();
}

ExtField decode_field_spec(const std::string& bytes, size_t& offset) {
    Reader r(bytes, offset);
    ExtField f = read_field_spec(r);
    offset = r.pos();
    return f;
}

std::string encode_query(const Query& q, const ExtField& f) {
    Writer w;
    w.bytes(kMagicQuery);
    w.u8(kVersion);
    write_params(w, q.params);
    write_field_spec(w, f);
    write_mat_ext(w, q.mat, q.params.s);
    return w.take();
}

std::pair<Query, ExtField> decode_query(const std::string& bytes) {
    Reader r(bytes);
    r.expect_magic(kMagicQuery, "query");
    check_version(r.u8());
    SchemeParams p = read_params(r);
    p.validate();
    ExtField f = read_field_spec(r);
    check_field_matches(p, f);
    MatExt mat = read_mat_ext(r, p.s, p.q);
    if (mat.rows != p.db_cols() || mat.cols != p.n)
        throw DimensionMismatch("query matrix shape disagrees with parameters");
    return {Query{p, std::move(mat)}, std::move(f)};
}

std::string encode_response(const Response& resp, const ExtField& f) {
    Writer w;
    w.bytes(kMagicResponse);
    w.u8(kVersion);
    write_params(w, resp.params);
    write_field_spec(w, f);
    write_mat_ext(w, resp.mat, resp.params.s);
    return w.take();
}

std::pair<Response, ExtField> decode_response(const std::string& bytes) {
    Reader r(bytes);
    r.expect_magic(kMagicResponse, "response");
    check_version(r.u8());
    SchemeParams p = read_params(r);
    p.validate();
    ExtField f = read_field_spec(r);
    check_field_matches(p, f);
    MatExt mat = read_mat_ext(r, p.s, p.q);
    if (mat.rows != p.big_l || mat.cols != p.n)
        throw DimensionMismatch("response matrix shape disagrees with parameters");
    return {Response{p, std::move(mat)}, std::move(f)};
}

std::string encode_database(const Database& db) {
    Writer w;
    w.bytes(kMagicDatabase);
    w.u8(kVersion);
    write_params(w, db.params);
    write_mat_base(w, db.mat);
    return w.take();
}

Database decode_database(const std::string& bytes) {
    Reader r(bytes);
    r.expect_magic(kMagicDatabase, "database");
    check_version(r.u8());
    SchemeParams p = read_params(r);
    p.validate();
    MatBase mat = read_mat_base(r, p.q);
    if (mat.rows != p.big_l || mat.cols != p.db_cols())
        throw DimensionMismatch("database matrix shape disagrees with parameters");
    return Database{p, std::move(mat)};
}

std::string encode_secret(const QuerySecret& secret) {
    Writer w;
    w.bytes(kMagicSecret);
    w.u8(kVersion);
    write_params(w, secret.params);
    w.u32(secret.index);
    write_field_spec(w, secret.field);
    w.u32(secret.code.n);
    w.u32(secret.code.k);
    write_mat_ext(w, secret.code.gen, secret.params.s);
    for (uint32_t idx : secret.iset.info) w.u32(idx);
    write_mat_base(w, secret.basis.rows);
    write_mat_ext(w, secret.delta_hat, secret.params.s);
    return w.take();
}

QuerySecret decode_secret(const std::string& bytes) {
    Reader r(bytes);
    r.expect_magic(kMagicSecret, "secret");
    check_version(r.u8());
    SchemeParams p = read_params(r);
    p.validate();
    uint32_t index = r.u32();
    if (index >= p.m) throw DimensionMismatch("secret file index out of range");
    ExtField f = read_field_spec(r);
    check_field_matches(p, f);
    uint32_t n = r.u32();
    uint32_t k = r.u32();
    if (n != p.n || k != p.k) throw DimensionMismatch("code shape disagrees with parameters");
    MatExt gen = read_mat_ext(r, p.s, p.q);
    if (gen.rows != k || gen.cols != n)
        throw DimensionMismatch("generator matrix shape disagrees with parameters");
    LinearCode code{n, k, std::move(gen)};
    if (rank(f, code.gen) != k) throw InconsistentResponse("stored generator matrix is rank-deficient");
    std::vector<uint32_t> info(k);
    for (auto& idx : info) idx = r.u32();
    InfoSet iset;
    try {
        iset = info_set_from_indices(f, code, std::move(info));
    } catch (const Singular&) {
        throw InconsistentResponse("stored information set is not invertible");
    }
    MatBase basis_rows = read_mat_base(r, p.q);
    SplitBasis basis;
    try {
        basis = split_basis_from_rows(f, std::move(basis_rows), p.v);
    } catch (const Singular&) {
        throw InconsistentResponse("stored basis is singular");
    }
    MatExt delta_hat = read_mat_ext(r, p.s, p.q);
    if (delta_hat.rows != p.delta() || delta_hat.cols != p.n - p.k)
        throw DimensionMismatch("payload matrix shape disagrees with parameters");
    for (const auto& e : delta_hat.a) {
        auto coords = basis_coords(f, basis, e);
        for (uint32_t j = 0; j < p.v; ++j)
            if (coords[j] != 0)
                throw InconsistentResponse("stored payload matrix leaves the payload space");
    }
    MatBase expansion = payload_expansion(f, basis, delta_hat);
    MatBase solver;
    try {
        solver = inverse(f.base(), expansion);
    } catch (const Singular&) {
        throw InconsistentResponse("stored payload matrix is not solvable");
    }
    return QuerySecret{p,
                       std::move(f),
                       std::move(code),
                       std::move(iset),
                       std::move(basis),
                       index,
                       std::move(delta_hat),
                       std::move(solver),
                       0};
}

uint64_t query_payload_bytes(const SchemeParams& p) {
    return p.db_cols() * p.n * p.s;
}

uint64_t response_payload_bytes(const SchemeParams& p) {
    return static_cast<uint64_t>(p.big_l) * p.n * p.s;
}

namespace {
uint64_t header_bytes(const SchemeParams& p) {
    // magic(7) + version(1) + params(28) + field spec(2+1+1+2+s+1) + matrix dims(8)
    return 7 + 1 + 28 + (6 + p.s + 1) + 8;
}
} // namespace

uint64_t query_header_bytes(const SchemeParams& p) { return header_bytes(p); }
uint64_t response_header_bytes(const SchemeParams& p) { return header_bytes(p); }

std::string encode_error(uint16_t code, const std::string& message) {
    Writer w;
    w.u16(code);
    w.bytes(message);
    return w.take();
}

std::pair<uint16_t, std::string> decode_error(const std::string& bytes) {
    Reader r(bytes);
    uint16_t code = r.u16();
    return {code, r.bytes(r.remaining())};
}

std::string encode_params_info(const SchemeParams& p) {
    Writer w;
    write_params(w, p);
    return w.take();
}

SchemeParams decode_params_info(const std::string& bytes) {
    Reader r(bytes);
    SchemeParams p = read_params(r);
    p.validate();
    return p;
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open for writing: " + path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("write failed: " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

// ---- sockets ---------------------------------------------------------------

namespace {

void send_all(int fd, const char* data, size_t len) {
    size_t sent = 0;
    while (sent < len) {
        ssize_t n = ::send(fd, data + sent, len - sent, MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw ConnectionFailed(std::string("send failed: ") + std::strerror(errno));
        }
        sent += static_cast<size_t>(n);
    }
}

void recv_all(int fd, char* data, size_t len) {
    size_t got = 0;
    while (got < len) {
        ssize_t n = ::recv(fd, data + got, len - got, 0);
        if (n == 0) throw ConnectionFailed("connection closed by peer");
        if (n < 0) {
            if (errno == EINTR) continue;
            throw ConnectionFailed(std::string("recv failed: ") + std::strerror(errno));
        }
        got += static_cast<size_t>(n);
    }
}

struct FdGuard {
    int fd = -1;
    ~FdGuard() {
        if (fd >= 0) ::close(fd);
    }
};

} // namespace

void send_frame(int fd, const Frame& frame) {
    Writer w;
    w.u32(static_cast<uint32_t>(frame.payload.size()));
    w.u8(frame.kind);
    std::string head = w.take();
    send_all(fd, head.data(), head.size());
    send_all(fd, frame.payload.data(), frame.payload.size());
}

Frame recv_frame(int fd) {
    char head[5];
    recv_all(fd, head, sizeof(head));
    uint32_t len = 0;
    for (int i = 0; i < 4; ++i) len |= static_cast<uint32_t>(static_cast<uint8_t>(head[i])) << (8 * i);
    if (len > kMaxFrameBytes) throw DimensionMismatch("frame too large");
    Frame frame;
    frame.kind = static_cast<uint8_t>(head[4]);
    frame.payload.resize(len);
    if (len > 0) recv_all(fd, frame.payload.data(), len);
    return frame;
}

Server::Server(Database db) : db_(std::move(db)) { db_.params.validate(); }

Server::~Server() { stop(); }

uint16_t Server::start(const std::string& address, uint16_t port) {
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) throw ConnectionFailed("cannot create socket");
    int yes = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (::inet_pton(AF_INET, address.c_str(), &addr.sin_addr) != 1) {
        ::close(listen_fd_);
        listen_fd_ = -1;
        throw ConnectionFailed("bad listen address: " + address);
    }
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
        ::listen(listen_fd_, 16) != 0) {
        ::close(listen_fd_);
        listen_fd_ = -1;
        throw ConnectionFailed(std::string("bind/listen failed: ") + std::strerror(errno));
    }
    socklen_t alen = sizeof(addr);
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &alen);
    port_ = ntohs(addr.sin_port);
    stopping_ = false;
    accept_thread_ = std::thread([this] { accept_loop(); });
    return port_;
}

void Server::stop() {
    if (listen_fd_ < 0) return;
    stopping_ = true;
    ::shutdown(listen_fd_, SHUT_RDWR);
    ::close(listen_fd_);
    listen_fd_ = -1;
    if (accept_thread_.joinable()) accept_thread_.join();
    std::vector<std::thread> workers;
    {
        std::lock_guard<std::mutex> lock(state_mutex_);
        workers.swap(workers_);
        for (int fd : open_fds_) ::shutdown(fd, SHUT_RDWR);
    }
    for (auto& t : workers)
        if (t.joinable()) t.join();
}

void Server::accept_loop() {
    for (;;) {
        int fd = ::accept(listen_fd_, nullptr, nullptr);
        if (fd < 0) {
            if (stopping_) return;
            if (errno == EINTR) continue;
            return;
        }
        std::lock_guard<std::mutex> lock(state_mutex_);
        if (stopping_) {
            ::close(fd);
            return;
        }
        open_fds_.push_back(fd);
        workers_.emplace_back([this, fd] { handle_connection(fd); });
    }
}

void Server::handle_connection(int fd) {
    FdGuard guard{fd};
    BaseField base = BaseField::with_default_modulus(db_.params.w());
    auto reply = [fd](uint8_t kind, std::string payload) {
        try {
            send_frame(fd, Frame{kind, std::move(payload)});
            return true;
        } catch (const Error&) {
            return false; // peer gone; the connection loop ends
        }
    };
    bool alive = true;
    while (alive) {
        Frame frame;
        try {
            frame = recv_frame(fd);
        } catch (const Error&) {
            break; // connection gone or stream hopeless
        }
        try {
            if (frame.kind == kFrameQuery) {
                auto [query, field] = decode_query(frame.payload);
                if (query.mat.rows != db_.mat.cols)
                    throw DimensionMismatch("query row count does not match this database");
                if (query.params != db_.params)
                    throw ParamMismatch("query parameters do not match this database");
                Response resp{db_.params, mixed_mul(base, db_.params.s, db_.mat, query.mat)};
                alive = reply(kFrameResponse, encode_response(resp, field));
            } else if (frame.kind == kFrameParamsProbe) {
                alive = reply(kFrameParamsInfo, encode_params_info(db_.params));
            } else {
                alive = reply(kFrameError, encode_error(kErrBadMagic, "unknown frame kind"));
            }
        } catch (const BadMagic& e) {
            alive = reply(kFrameError, encode_error(kErrBadMagic, e.what()));
        } catch (const UnsupportedVersion& e) {
            alive = reply(kFrameError, encode_error(kErrUnsupportedVersion, e.what()));
        } catch (const ParamMismatch& e) {
            alive = reply(kFrameError, encode_error(kErrParamMismatch, e.what()));
        } catch (const Error& e) {
            alive = reply(kFrameError, encode_error(kErrDimensionMismatch, e.what()));
        } catch (const std::exception& e) {
            alive = reply(kFrameError, encode_error(kErrDimensionMismatch, e.what()));
        }
    }
    std::lock_guard<std::mutex> lock(state_mutex_);
    std::erase(open_fds_, fd);
}

Response fetch(const std::string& address, uint16_t port, const Query& query,
               const ExtField& field) {
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw ConnectionFailed("cannot create socket");
    FdGuard guard{fd};
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (::inet_pton(AF_INET, address.c_str(), &addr.sin_addr) != 1)
        throw ConnectionFailed("bad server address: " + address);
    if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0)
        throw ConnectionFailed(std::string("connect failed: ") + std::strerror(errno));
    send_frame(fd, Frame{kFrameQuery, encode_query(query, field)});
    Frame reply = recv_frame(fd);
    if (reply.kind == kFrameResponse) return decode_response(reply.payload).first;
    if (reply.kind == kFrameError) {
        auto [code, message] = decode_error(reply.payload);
        throw ServerError(code, message);
    }
    throw ServerError(0, "unexpected frame kind " + std::to_string(reply.kind));
}

} // namespace wire
} // namespace cpir
