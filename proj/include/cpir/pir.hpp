#pragma once

#include <cstdint>
#include <utility>

#include "cpir/code.hpp"
#include "cpir/subspace.hpp"

namespace cpir {

/// Public scheme parameters. q = 2^w is the file alphabet, s the
/// extension degree, v the noise-space dimension, [n, k] the secret code
/// shape, m the number of files and L the number of file rows. The
/// subpacketization delta = (s - v)(n - k) is the number of F_q symbols
/// per file row.
struct SchemeParams {
    uint32_t q = 0;
    uint32_t s = 0;
    uint32_t v = 0;
    uint32_t n = 0;
    uint32_t k = 0;
    uint32_t m = 0;
    uint32_t big_l = 0;

    uint8_t w() const;
    uint64_t delta() const { return static_cast<uint64_t>(s - v) * (n - k); }
    uint64_t db_cols() const { return delta() * m; }

    /// Throws InvalidParams naming the violated constraint.
    void validate() const;

    bool operator==(const SchemeParams& other) const = default;
};

/// The stored file matrix: big_l rows, m * delta columns over F_q; file i
/// occupies the delta-column block starting at i * delta (0-based).
struct Database {
    SchemeParams params;
    MatBase mat;
};

Database random_database(const SchemeParams& params, Rng& rng);

/// What goes to the server: an (m * delta) x n matrix over F_{q^s} whose
/// rows are codewords corrupted by noise-space errors, with payload-space
/// errors added on the queried file's row block.
struct Query {
    SchemeParams params;
    MatExt mat;
};

/// What comes back: big_l rows of F_q-combinations of the query rows.
struct Response {
    SchemeParams params;
    MatExt mat;
};

/// User-side trapdoor for one query.
struct QuerySecret {
    SchemeParams params;
    ExtField field;
    LinearCode code;
    InfoSet iset;
    SplitBasis basis;
    uint32_t index = 0; // 0-based file index
    MatExt delta_hat;   // delta x (n - k), entries in the payload space
    MatBase solver;     // inverse of the payload-coordinate expansion of delta_hat
    uint64_t seed = 0;
};

inline constexpr uint32_t kDeltaHatRetryLimit = 100;

/// Columns of packed placed at the sorted support indices, zero elsewhere;
/// packed must have exactly support.size() columns.
MatExt scatter_columns(const ExtField& f, const MatExt& packed,
                       std::span<const uint32_t> support, uint32_t n);

/// The payload-coordinate expansion of delta_hat: the delta x delta base
/// matrix mapping a file row x to the payload coordinates of x * delta_hat.
MatBase payload_expansion(const ExtField& f, const SplitBasis& basis, const MatExt& delta_hat);

/// Builds the query for file `index` (0-based) with fresh randomness
/// derived from seed. Returns the public query and the secret needed to
/// recover the file from the response.
std::pair<Query, QuerySecret> build_query(const SchemeParams& params, uint32_t index,
                                          uint64_t seed);

/// Server side: response = database * query, computed with subfield
/// scalar multiplications only.
Response respond(const Database& db, const Query& query);

/// Recovers the queried file as a big_l x delta matrix over F_q. Throws
/// InconsistentResponse when the response fails the structural checks.
MatBase recover_file(const Response& response, const QuerySecret& secret);

} // namespace cpir
