#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <arpa/inet.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstdio>
#include <thread>

#include "cpir/analysis.hpp"
#include "cpir/wire.hpp"

using namespace cpir;

namespace {

const SchemeParams kDesk{4, 4, 2, 10, 5, 3, 8};

std::string corrupt_byte(std::string bytes, size_t offset, uint8_t flip) {
    bytes[offset] = static_cast<char>(static_cast<uint8_t>(bytes[offset]) ^ flip);
    return bytes;
}

} // namespace

TEST_CASE("field specs round-trip byte-exactly") {
    for (uint8_t w : {1, 2, 4, 8}) {
        BaseField base = BaseField::with_default_modulus(w);
        Rng rng(w);
        ExtField f = ExtField::with_random_modulus(base, 3 + w, rng);
        std::string bytes = wire::encode_field_spec(f);
        CHECK(bytes.size() == 2 + 1 + 1 + 2 + (3 + w + 1));
        size_t offset = 0;
        ExtField back = wire::decode_field_spec(bytes, offset);
        CHECK(offset == bytes.size());
        CHECK(back == f);
    }
}

TEST_CASE("queries round-trip and reject malformed bytes") {
    auto [query, secret] = build_query(kDesk, 1, 99);
    std::string bytes = wire::encode_query(query, secret.field);
    auto [back, field] = wire::decode_query(bytes);
    CHECK(back.params == query.params);
    CHECK(back.mat == query.mat);
    CHECK(field == secret.field);

    CHECK_THROWS_AS(wire::decode_query(corrupt_byte(bytes, 0, 0xff)), BadMagic);
    CHECK_THROWS_AS(wire::decode_query(corrupt_byte(bytes, 7, 0xff)), UnsupportedVersion);
    std::string truncated = bytes.substr(0, bytes.size() - 5);
    CHECK_THROWS_AS(wire::decode_query(truncated), DimensionMismatch);
    std::string empty;
    CHECK_THROWS_AS(wire::decode_query(empty), BadMagic);
}

TEST_CASE("responses round-trip") {
    Rng rng(7);
    Database db = random_database(kDesk, rng);
    auto [query, secret] = build_query(kDesk, 0, 55);
    Response resp = respond(db, query);
    std::string bytes = wire::encode_response(resp, secret.field);
    auto [back, field] = wire::decode_response(bytes);
    CHECK(back.params == resp.params);
    CHECK(back.mat == resp.mat);
    CHECK_THROWS_AS(wire::decode_response(corrupt_byte(bytes, 1, 0x55)), BadMagic);
}

TEST_CASE("databases round-trip and validate shape") {
    Rng rng(13);
    Database db = random_database(kDesk, rng);
    std::string bytes = wire::encode_database(db);
    Database back = wire::decode_database(bytes);
    CHECK(back.params == db.params);
    CHECK(back.mat == db.mat);
    // out-of-range element: the first matrix byte after rows/cols
    size_t header = 6 + 1 + 28 + 8;
    std::string bad = bytes;
    bad[header] = static_cast<char>(200); // q = 4, so 200 is out of range
    CHECK_THROWS_AS(wire::decode_database(bad), DimensionMismatch);
}

TEST_CASE("secrets round-trip through bytes and recover files identically") {
    Rng rng(17);
    Database db = random_database(kDesk, rng);
    auto [query, secret] = build_query(kDesk, 2, 77);
    Response resp = respond(db, query);
    MatBase truth = recover_file(resp, secret);

    std::string bytes = wire::encode_secret(secret);
    QuerySecret back = wire::decode_secret(bytes);
    CHECK(back.params == secret.params);
    CHECK(back.index == secret.index);
    CHECK(back.code.gen == secret.code.gen);
    CHECK(back.iset.info == secret.iset.info);
    CHECK(back.basis.rows == secret.basis.rows);
    CHECK(back.delta_hat == secret.delta_hat);
    CHECK(recover_file(resp, back) == truth);
}

TEST_CASE("serialized payload sizes match the closed-form bit counts") {
    // one byte per base coefficient; the closed forms count w bits per
    // coefficient, so payload bytes equal bits / w
    Rng rng(23);
    for (uint32_t trial = 0; trial < 10; ++trial) {
        SchemeParams p;
        p.q = uint32_t{1} << (1 + rng.below(3));
        p.s = 2 + rng.below(3);
        p.v = 1 + rng.below(p.s - 1);
        p.k = 1 + rng.below(3);
        p.n = p.k + 1 + rng.below(3);
        p.m = 1 + rng.below(3);
        p.big_l = 1 + rng.below(4);
        p.validate();
        CAPTURE(trial);

        auto [query, secret] = build_query(p, 0, 1000 + trial);
        std::string q_bytes = wire::encode_query(query, secret.field);
        uint64_t payload = q_bytes.size() - wire::query_header_bytes(p);
        CHECK(payload == wire::query_payload_bytes(p));
        CHECK(payload == upload_bits(p) / p.w());

        Database db = random_database(p, rng);
        Response resp = respond(db, query);
        std::string r_bytes = wire::encode_response(resp, secret.field);
        uint64_t r_payload = r_bytes.size() - wire::response_header_bytes(p);
        CHECK(r_payload == wire::response_payload_bytes(p));
        CHECK(r_payload == download_bits(p) / p.w());
    }
}

TEST_CASE("files round-trip through disk") {
    Rng rng(29);
    Database db = random_database(kDesk, rng);
    std::string path = "/tmp/cpir_test_db.bin";
    wire::write_file(path, wire::encode_database(db));
    Database loaded = wire::decode_database(wire::read_file(path));
    CHECK(loaded.params == db.params);
    CHECK(loaded.mat == db.mat);
    std::remove(path.c_str());
    CHECK_THROWS_AS(wire::read_file("/tmp/definitely_missing_cpir_file"), Error);
}

TEST_CASE("loopback serve and fetch match local computation") {
    Rng rng(31);
    Database db = random_database(kDesk, rng);
    wire::Server server(db);
    uint16_t port = server.start("127.0.0.1", 0);
    REQUIRE(port != 0);

    auto [query, secret] = build_query(kDesk, 1, 321);
    Response local = respond(db, query);
    Response remote = wire::fetch("127.0.0.1", port, query, secret.field);
    CHECK(remote.mat == local.mat);
    CHECK(recover_file(remote, secret) == recover_file(local, secret));
    server.stop();
}

TEST_CASE("mismatched query shape draws error code 1 and the server survives") {
    Rng rng(37);
    Database db = random_database(kDesk, rng);
    wire::Server server(db);
    uint16_t port = server.start("127.0.0.1", 0);

    // a self-consistent query for different parameters: m differs, so the
    // row count no longer matches the database column count
    SchemeParams other = kDesk;
    other.m = 2;
    auto [wrong_query, wrong_secret] = build_query(other, 0, 11);
    try {
        wire::fetch("127.0.0.1", port, wrong_query, wrong_secret.field);
        FAIL("expected a server error");
    } catch (const ServerError& e) {
        CHECK(e.code == wire::kErrDimensionMismatch);
    }

    // the daemon keeps serving after the error
    auto [query, secret] = build_query(kDesk, 0, 12);
    Response remote = wire::fetch("127.0.0.1", port, query, secret.field);
    CHECK(remote.mat == respond(db, query).mat);
    server.stop();
}

TEST_CASE("parameter mismatches with matching shape draw error code 4") {
    Rng rng(41);
    Database db = random_database(kDesk, rng);
    wire::Server server(db);
    uint16_t port = server.start("127.0.0.1", 0);

    // same matrix shape, different advertised L: the row count still
    // matches the database, but the parameter headers disagree
    auto [query, secret] = build_query(kDesk, 0, 13);
    Query tweaked = query;
    tweaked.params.big_l = kDesk.big_l + 1;
    try {
        wire::fetch("127.0.0.1", port, tweaked, secret.field);
        FAIL("expected a server error");
    } catch (const ServerError& e) {
        CHECK(e.code == wire::kErrParamMismatch);
    }
    server.stop();
}

TEST_CASE("unknown frame kinds and garbage frames get error replies") {
    Rng rng(43);
    Database db = random_database(kDesk, rng);
    wire::Server server(db);
    uint16_t port = server.start("127.0.0.1", 0);

    // raw socket poke: send an unknown kind, then a well-framed garbage
    // query, then a real query
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    REQUIRE(fd >= 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    inet_pton(AF_INET, "127.0.0.1", &addr.sin_addr);
    REQUIRE(::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) == 0);

    wire::send_frame(fd, wire::Frame{9, "??"});
    wire::Frame reply = wire::recv_frame(fd);
    CHECK(reply.kind == wire::kFrameError);
    CHECK(wire::decode_error(reply.payload).first == wire::kErrBadMagic);

    wire::send_frame(fd, wire::Frame{wire::kFrameQuery, "not a query"});
    reply = wire::recv_frame(fd);
    CHECK(reply.kind == wire::kFrameError);
    CHECK(wire::decode_error(reply.payload).first == wire::kErrBadMagic);

    // params probe answers with the database parameters
    wire::send_frame(fd, wire::Frame{wire::kFrameParamsProbe, ""});
    reply = wire::recv_frame(fd);
    CHECK(reply.kind == wire::kFrameParamsInfo);
    CHECK(wire::decode_params_info(reply.payload) == kDesk);

    auto [query, secret] = build_query(kDesk, 2, 14);
    wire::send_frame(fd, wire::Frame{wire::kFrameQuery, wire::encode_query(query, secret.field)});
    reply = wire::recv_frame(fd);
    CHECK(reply.kind == wire::kFrameResponse);
    ::close(fd);
    server.stop();
}

TEST_CASE("fetching from a dead port raises a connection failure") {
    Rng rng(47);
    Database db = random_database(kDesk, rng);
    wire::Server server(db);
    uint16_t port = server.start("127.0.0.1", 0);
    server.stop();
    auto [query, secret] = build_query(kDesk, 0, 15);
    CHECK_THROWS_AS(wire::fetch("127.0.0.1", port, query, secret.field), ConnectionFailed);
}

TEST_CASE("identical queries produce identical responses across connections") {
    Rng rng(53);
    Database db = random_database(kDesk, rng);
    wire::Server server(db);
    uint16_t port = server.start("127.0.0.1", 0);
    auto [query, secret] = build_query(kDesk, 1, 16);
    Response first = wire::fetch("127.0.0.1", port, query, secret.field);
    Response second = wire::fetch("127.0.0.1", port, query, secret.field);
    CHECK(first.mat == second.mat);
    server.stop();
}

TEST_CASE("two concurrent clients both get correct responses") {
    Rng rng(59);
    Database db = random_database(kDesk, rng);
    wire::Server server(db);
    uint16_t port = server.start("127.0.0.1", 0);

    auto worker = [&](uint64_t seed, bool& ok) {
        auto [query, secret] = build_query(kDesk, static_cast<uint32_t>(seed % kDesk.m), seed);
        Response remote = wire::fetch("127.0.0.1", port, query, secret.field);
        ok = remote.mat == respond(db, query).mat;
    };
    bool ok1 = false, ok2 = false;
    std::thread t1(worker, 71, std::ref(ok1));
    std::thread t2(worker, 72, std::ref(ok2));
    t1.join();
    t2.join();
    CHECK(ok1);
    CHECK(ok2);
    server.stop();
}
