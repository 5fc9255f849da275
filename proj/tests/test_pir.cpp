#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cpir/pir.hpp"

using namespace cpir;

namespace {

const SchemeParams kDesk{4, 4, 2, 10, 5, 3, 8}; // delta = 10

MatBase file_block(const Database& db, uint32_t index) {
    auto delta = static_cast<uint32_t>(db.params.delta());
    MatBase out(db.params.big_l, delta);
    for (uint32_t r = 0; r < db.params.big_l; ++r)
        for (uint32_t c = 0; c < delta; ++c) out.at(r, c) = db.mat.at(r, index * delta + c);
    return out;
}

} // namespace

TEST_CASE("parameter validation accepts the reference rows and names violations") {
    SchemeParams good{16, 32, 31, 100, 50, 2, 4};
    good.validate();
    CHECK(good.delta() == 50);
    SchemeParams bad = good;
    bad.v = 32;
    CHECK_THROWS_AS(bad.validate(), InvalidParams);
    SchemeParams row2{16, 32, 16, 100, 50, 1, 1};
    row2.validate();
    CHECK(row2.delta() == 800);
    CHECK(kDesk.delta() == 10);
    CHECK(kDesk.db_cols() == 30);
}

TEST_CASE("column scattering places columns at the support and zeroes the rest") {
    BaseField base = BaseField::with_default_modulus(2);
    Rng rng(3);
    ExtField f = ExtField::with_random_modulus(base, 2, rng);
    // the worked 2x2 example: columns land at positions 2 and 4 of 4
    MatExt packed(2, 2, f);
    packed.at(0, 0) = f.embed(1);
    packed.at(0, 1) = f.embed(2);
    packed.at(1, 0) = f.embed(3);
    packed.at(1, 1) = f.embed(0); // stand-in for 4 mod q
    std::vector<uint32_t> support = {1, 3};
    MatExt out = scatter_columns(f, packed, support, 4);
    CHECK(out.rows == 2);
    CHECK(out.cols == 4);
    for (uint32_t r = 0; r < 2; ++r) {
        CHECK(f.is_zero(out.at(r, 0)));
        CHECK(f.is_zero(out.at(r, 2)));
        CHECK(out.at(r, 1) == packed.at(r, 0));
        CHECK(out.at(r, 3) == packed.at(r, 1));
    }
    // full support is the identity mapping
    std::vector<uint32_t> all = {0, 1, 2, 3};
    MatExt wide(1, 4, f);
    for (uint32_t c = 0; c < 4; ++c) wide.at(0, c) = f.random_elem(rng);
    CHECK(scatter_columns(f, wide, all, 4) == wide);
    // single-column support
    MatExt single(2, 1, f);
    single.at(0, 0) = f.embed(1);
    single.at(1, 0) = f.embed(3);
    MatExt placed = scatter_columns(f, single, std::vector<uint32_t>{0}, 3);
    CHECK(placed.at(0, 0) == f.embed(1));
    CHECK(f.is_zero(placed.at(0, 1)));
    CHECK(f.is_zero(placed.at(0, 2)));
    // shape mismatch rejected
    CHECK_THROWS_AS(scatter_columns(f, packed, std::vector<uint32_t>{1}, 4), DimensionMismatch);
}

TEST_CASE("queries have the documented shape and structure") {
    auto [query, secret] = build_query(kDesk, 1, 12345);
    const ExtField& f = secret.field;
    CHECK(query.mat.rows == 30);
    CHECK(query.mat.cols == 10);
    CHECK(secret.index == 1);

    // payload matrix lives in the payload space with full base rank
    CHECK(rank_over_base(f, secret.delta_hat) == kDesk.delta());
    for (const auto& e : secret.delta_hat.a)
        CHECK(payload_part(f, secret.basis, e) == e);

    // every row minus its noise and payload contributions is a codeword:
    // check via rank against the generator
    auto delta = static_cast<uint32_t>(kDesk.delta());
    for (uint32_t r = 0; r < query.mat.rows; ++r) {
        MatExt stacked(secret.code.k + 1, kDesk.n, f);
        for (uint32_t gr = 0; gr < secret.code.k; ++gr)
            for (uint32_t c = 0; c < kDesk.n; ++c) stacked.at(gr, c) = secret.code.gen.at(gr, c);
        for (uint32_t c = 0; c < kDesk.n; ++c) {
            ExtElem entry = query.mat.at(r, c);
            // erasure columns carry noise (and payload on the file block)
            bool erased = std::count(secret.iset.erasure.begin(), secret.iset.erasure.end(), c);
            if (erased) {
                // remove the payload contribution on the queried block
                if (r >= secret.index * delta && r < (secret.index + 1) * delta) {
                    uint32_t e = 0;
                    while (secret.iset.erasure[e] != c) ++e;
                    entry = f.add(entry, secret.delta_hat.at(r - secret.index * delta, e));
                }
                // the rest of the erasure-column residue is noise; strip
                // its noise part and require the payload part to vanish
                // (codeword part is handled by the rank check below)
            }
            stacked.at(secret.code.k, c) = entry;
        }
        // after removing the payload block the row is codeword + noise,
        // supported on erasure columns; restricted to the information
        // set it must be a codeword restriction: check rank on info cols
        MatExt info_only(secret.code.k + 1, secret.code.k, f);
        for (uint32_t gr = 0; gr <= secret.code.k; ++gr)
            for (uint32_t c = 0; c < secret.code.k; ++c)
                info_only.at(gr, c) = stacked.at(gr, secret.iset.info[c]);
        CHECK(rank(f, info_only) == secret.code.k);
    }

    // noise layer vanishes on information-set columns: the query
    // restricted to them is exactly the codeword layer, so erasure
    // decoding each row and re-restricting must reproduce it (full round
    // trip covered in the recovery tests)
    for (uint32_t r = 0; r < query.mat.rows; ++r) {
        std::vector<ExtElem> on_info;
        for (uint32_t idx : secret.iset.info) on_info.push_back(query.mat.at(r, idx));
        auto word = erasure_decode(f, secret.code, secret.iset, on_info);
        for (uint32_t t = 0; t < secret.iset.info.size(); ++t)
            CHECK(word[secret.iset.info[t]] == on_info[t]);
    }

    CHECK_THROWS_AS(build_query(kDesk, 3, 1), InvalidParams); // index out of range
}

TEST_CASE("noise columns differ from pure codeword columns off the file block") {
    // reconstruct the noise layer on one non-file row: subtract the
    // erasure-decoded codeword; the residue must lie in the noise space
    auto [query, secret] = build_query(kDesk, 2, 777);
    const ExtField& f = secret.field;
    for (uint32_t r = 0; r < 20; ++r) { // rows of files 0 and 1
        std::vector<ExtElem> on_info;
        for (uint32_t idx : secret.iset.info) on_info.push_back(query.mat.at(r, idx));
        auto word = erasure_decode(f, secret.code, secret.iset, on_info);
        for (uint32_t c = 0; c < kDesk.n; ++c) {
            ExtElem residual = f.add(query.mat.at(r, c), word[c]);
            CHECK(f.is_zero(payload_part(f, secret.basis, residual)));
        }
    }
}

TEST_CASE("responding is linear and selects rows for unit databases") {
    auto [query, secret] = build_query(kDesk, 0, 999);
    Rng rng(5);
    Database zero{kDesk, MatBase(kDesk.big_l, 30)};
    Response rz = respond(zero, query);
    for (const auto& e : rz.mat.a) CHECK(secret.field.is_zero(e));

    // unit row picks out one query row
    SchemeParams one_row = kDesk;
    one_row.big_l = 1;
    Database unit{one_row, MatBase(1, 30)};
    unit.mat.at(0, 7) = 1;
    Query q1{one_row, query.mat};
    Response r1 = respond(unit, q1);
    for (uint32_t c = 0; c < kDesk.n; ++c) CHECK(r1.mat.at(0, c) == query.mat.at(7, c));

    // additivity over databases
    Database a = random_database(kDesk, rng);
    Database b = random_database(kDesk, rng);
    Database sum = a;
    for (size_t i = 0; i < sum.mat.a.size(); ++i)
        sum.mat.a[i] = secret.field.base().add(a.mat.a[i], b.mat.a[i]);
    Response ra = respond(a, query);
    Response rb = respond(b, query);
    Response rs = respond(sum, query);
    CHECK(rs.mat == add(secret.field, ra.mat, rb.mat));

    // parameter and shape mismatches are rejected
    SchemeParams other = kDesk;
    other.m = 4;
    Rng rng2(6);
    Database wrong = random_database(other, rng2);
    CHECK_THROWS_AS(respond(wrong, query), ParamMismatch);
}

TEST_CASE("the full round trip recovers the queried file for every index") {
    for (uint64_t seed = 0; seed < 12; ++seed) {
        Rng rng(seed);
        Database db = random_database(kDesk, rng);
        for (uint32_t index = 0; index < kDesk.m; ++index) {
            auto [query, secret] = build_query(kDesk, index, seed * 17 + index + 1);
            Response resp = respond(db, query);
            MatBase recovered = recover_file(resp, secret);
            CHECK(recovered == file_block(db, index));
        }
    }
}

TEST_CASE("an all-zero database decodes to an all-zero file") {
    Database zero{kDesk, MatBase(kDesk.big_l, 30)};
    auto [query, secret] = build_query(kDesk, 1, 4242);
    MatBase recovered = recover_file(respond(zero, query), secret);
    for (uint8_t e : recovered.a) CHECK(e == 0);
}

TEST_CASE("corrupting the response yields a wrong file or an error") {
    Rng rng(31);
    Database db = random_database(kDesk, rng);
    auto [query, secret] = build_query(kDesk, 0, 555);
    Response resp = respond(db, query);
    MatBase truth = recover_file(resp, secret);

    // corrupt one entry at an information-set column
    Response corrupted = resp;
    uint32_t col = secret.iset.info[2];
    corrupted.mat.at(3, col) = secret.field.add(corrupted.mat.at(3, col), secret.field.one());
    bool detected = false;
    try {
        MatBase out = recover_file(corrupted, secret);
        detected = out != truth;
    } catch (const InconsistentResponse&) {
        detected = true;
    }
    CHECK(detected);

    // corrupt one entry at an erasure column
    Response corrupted2 = resp;
    uint32_t col2 = secret.iset.erasure[0];
    corrupted2.mat.at(0, col2) =
        secret.field.add(corrupted2.mat.at(0, col2), secret.field.monomial(1));
    bool detected2 = false;
    try {
        MatBase out = recover_file(corrupted2, secret);
        detected2 = out != truth;
    } catch (const InconsistentResponse&) {
        detected2 = true;
    }
    CHECK(detected2);

    // decoding with a fresh secret for the same parameters gives garbage
    // or an error, never silently the right file
    auto [query2, wrong_secret] = build_query(kDesk, 0, 556);
    bool mismatch = false;
    try {
        MatBase out = recover_file(resp, wrong_secret);
        mismatch = out != truth;
    } catch (const Error&) {
        mismatch = true;
    }
    CHECK(mismatch);

    // response shape mismatches are rejected
    Response bad = resp;
    bad.mat = MatExt::zeros(kDesk.big_l, kDesk.n + 1, kDesk.s);
    CHECK_THROWS_AS(recover_file(bad, secret), DimensionMismatch);
}

TEST_CASE("round trips hold at a mid-scale parameter set") {
    // larger base field, deeper extension, wider code
    SchemeParams p{16, 8, 4, 20, 10, 4, 16}; // delta = 40
    Rng rng(7117);
    Database db = random_database(p, rng);
    auto delta = static_cast<uint32_t>(p.delta());
    for (uint32_t index : {0u, 3u}) {
        auto [query, secret] = build_query(p, index, 9000 + index);
        MatBase recovered = recover_file(respond(db, query), secret);
        REQUIRE(recovered.rows == p.big_l);
        REQUIRE(recovered.cols == delta);
        bool exact = true;
        for (uint32_t r = 0; r < p.big_l && exact; ++r)
            for (uint32_t c = 0; c < delta; ++c)
                if (recovered.at(r, c) != db.mat.at(r, index * delta + c)) exact = false;
        CHECK(exact);
    }
}

TEST_CASE("query builds are deterministic in the seed") {
    auto [q1, s1] = build_query(kDesk, 2, 31337);
    auto [q2, s2] = build_query(kDesk, 2, 31337);
    CHECK(q1.mat == q2.mat);
    CHECK(s1.code.gen == s2.code.gen);
    CHECK(s1.iset.info == s2.iset.info);
    CHECK(s1.basis.rows == s2.basis.rows);
    CHECK(s1.delta_hat == s2.delta_hat);
    auto [q3, s3] = build_query(kDesk, 2, 31338);
    CHECK(q1.mat != q3.mat);
}
