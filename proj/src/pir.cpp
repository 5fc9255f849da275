#include "cpir/pir.hpp"

#include <string>

namespace cpir {

uint8_t SchemeParams::w() const {
    if (q < 2 || (q & (q - 1)) != 0 || q > 256) return 0;
    uint8_t w = 0;
    uint32_t t = q;
    while (t > 1) {
        t >>= 1;
        ++w;
    }
    return w;
}

void SchemeParams::validate() const {
    if (q < 2 || q > 256 || (q & (q - 1)) != 0)
        throw InvalidParams("q must be a power of two with 2 <= q <= 256");
    if (s < 2) throw InvalidParams("extension degree s must be at least 2");
    if (v == 0) throw InvalidParams("noise dimension v must be positive");
    if (v >= s) throw InvalidParams("noise dimension must satisfy v < s");
    if (k == 0) throw InvalidParams("code dimension k must be positive");
    if (k >= n) throw InvalidParams("code shape must satisfy k < n");
    if (m == 0) throw InvalidParams("file count m must be positive");
    if (big_l == 0) throw InvalidParams("file length L must be positive");
}

Database random_database(const SchemeParams& params, Rng& rng) {
    params.validate();
    BaseField base = BaseField::with_default_modulus(params.w());
    MatBase x(params.big_l, static_cast<uint32_t>(params.db_cols()));
    for (auto& e : x.a) e = base.random_elem(rng);
    return Database{params, std::move(x)};
}

MatExt scatter_columns(const ExtField& f, const MatExt& packed,
                       std::span<const uint32_t> support, uint32_t n) {
    if (packed.cols != support.size())
        throw DimensionMismatch("support size must match packed column count");
    MatExt out(packed.rows, n, f);
    for (uint32_t c = 0; c < packed.cols; ++c) {
        uint32_t target = support[c];
        if (target >= n) throw DimensionMismatch("support index out of range");
        for (uint32_t r = 0; r < packed.rows; ++r) out.at(r, target) = packed.at(r, c);
    }
    return out;
}

MatBase payload_expansion(const ExtField& f, const SplitBasis& basis,
                          const MatExt& delta_hat) {
    uint32_t pd = basis.payload_dim();
    MatBase out(delta_hat.rows, delta_hat.cols * pd);
    for (uint32_t r = 0; r < delta_hat.rows; ++r)
        for (uint32_t c = 0; c < delta_hat.cols; ++c) {
            auto coords = basis_coords(f, basis, delta_hat.at(r, c));
            for (uint32_t j = 0; j < pd; ++j)
                out.at(r, c * pd + j) = coords[basis.noise_dim + j];
        }
    return out;
}

std::pair<Query, QuerySecret> build_query(const SchemeParams& params, uint32_t index,
                                          uint64_t seed) {
    params.validate();
    if (index >= params.m) throw InvalidParams("file index out of range");

    Rng rng(seed);
    BaseField base = BaseField::with_default_modulus(params.w());
    ExtField field = ExtField::with_random_modulus(base, params.s, rng);

    LinearCode code = sample_code(field, params.n, params.k, rng);
    InfoSet iset = pick_information_set(field, code, rng);
    SplitBasis basis = sample_split_basis(field, params.v, rng);

    auto delta = static_cast<uint32_t>(params.delta());
    uint32_t rows = delta * params.m;
    uint32_t nk = params.n - params.k;

    // codeword layer
    MatExt query_mat(rows, params.n, field);
    for (uint32_t r = 0; r < rows; ++r) {
        auto word = sample_codeword(field, code, rng);
        for (uint32_t c = 0; c < params.n; ++c) query_mat.at(r, c) = std::move(word[c]);
    }

    // noise layer, supported on the erasure columns
    for (uint32_t r = 0; r < rows; ++r)
        for (uint32_t e = 0; e < nk; ++e) {
            ExtElem noise = sample_part_elem(field, basis, Part::noise, rng);
            uint32_t c = iset.erasure[e];
            query_mat.at(r, c) = field.add(query_mat.at(r, c), noise);
        }

    // payload layer: full-F_q-rank matrix over the payload space, placed
    // on the queried file's row block
    MatExt delta_hat(delta, nk, field);
    MatBase expansion;
    bool ok = false;
    for (uint32_t attempt = 0; attempt < kDeltaHatRetryLimit; ++attempt) {
        for (auto& e : delta_hat.a) e = sample_part_elem(field, basis, Part::payload, rng);
        expansion = payload_expansion(field, basis, delta_hat);
        if (rank(base, expansion) == delta) {
            ok = true;
            break;
        }
    }
    if (!ok) throw RetryLimitExceeded("could not sample a full-rank payload matrix");
    MatBase solver = inverse(base, expansion);

    uint32_t block_start = index * delta;
    for (uint32_t d = 0; d < delta; ++d)
        for (uint32_t e = 0; e < nk; ++e) {
            uint32_t c = iset.erasure[e];
            query_mat.at(block_start + d, c) =
                field.add(query_mat.at(block_start + d, c), delta_hat.at(d, e));
        }

    Query query{params, std::move(query_mat)};
    QuerySecret secret{params,          field, std::move(code), std::move(iset),
                       std::move(basis), index, std::move(delta_hat), std::move(solver),
                       seed};
    return {std::move(query), std::move(secret)};
}

Response respond(const Database& db, const Query& query) {
    if (db.params != query.params) throw ParamMismatch("database and query parameters differ");
    if (db.mat.cols != query.mat.rows)
        throw DimensionMismatch("database column count must equal query row count");
    BaseField base = BaseField::with_default_modulus(db.params.w());
    return Response{db.params, mixed_mul(base, db.params.s, db.mat, query.mat)};
}

MatBase recover_file(const Response& response, const QuerySecret& secret) {
    if (response.params != secret.params)
        throw ParamMismatch("response and secret parameters differ");
    const ExtField& field = secret.field;
    const SchemeParams& p = secret.params;
    auto delta = static_cast<uint32_t>(p.delta());
    uint32_t nk = p.n - p.k;
    uint32_t pd = secret.basis.payload_dim();
    if (response.mat.rows != p.big_l || response.mat.cols != p.n)
        throw DimensionMismatch("response matrix has the wrong shape");

    MatBase file(p.big_l, delta);
    std::vector<ExtElem> on_info(p.k, field.zero());
    std::vector<uint8_t> payload_coords(delta, 0);
    for (uint32_t z = 0; z < p.big_l; ++z) {
        for (uint32_t t = 0; t < p.k; ++t) on_info[t] = response.mat.at(z, secret.iset.info[t]);
        auto codeword = erasure_decode(field, secret.code, secret.iset, on_info);
        // residual must vanish on the information set; its payload-space
        // coordinates on the erasure set carry the file row
        for (uint32_t t = 0; t < p.k; ++t) {
            ExtElem r = field.add(response.mat.at(z, secret.iset.info[t]), codeword[secret.iset.info[t]]);
            if (!field.is_zero(r))
                throw InconsistentResponse("residual is nonzero on the information set");
        }
        for (uint32_t e = 0; e < nk; ++e) {
            uint32_t c = secret.iset.erasure[e];
            ExtElem residual = field.add(response.mat.at(z, c), codeword[c]);
            auto coords = basis_coords(field, secret.basis, residual);
            for (uint32_t j = 0; j < pd; ++j)
                payload_coords[e * pd + j] = coords[secret.basis.noise_dim + j];
        }
        // x * expansion = payload_coords  =>  x = payload_coords * solver
        for (uint32_t c = 0; c < delta; ++c) {
            uint8_t acc = 0;
            for (uint32_t t = 0; t < delta; ++t)
                acc = field.base().add(acc, field.base().mul(payload_coords[t], secret.solver.at(t, c)));
            file.at(z, c) = acc;
        }
    }
    return file;
}

} // namespace cpir
