#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cpir/pir.hpp"

namespace cpir {

/// A guessed F_q-subspace of the extension field: z independent rows in
/// polynomial-basis coordinates.
struct SubspaceGuess {
    MatBase basis_rows; // z x s, F_q-independent rows
    uint32_t dim() const { return basis_rows.rows; }
};

/// Outcome of running the per-file distinguisher over all files.
struct AttackVerdict {
    std::vector<int64_t> subcode_dims;      // one entry per file
    std::optional<uint32_t> recovered_index; // set iff exactly one file fired
};

/// The guess spanned by the query secret's true noise space, for
/// white-box experiments.
SubspaceGuess true_noise_guess(const QuerySecret& secret);

/// Uniformly random dim-dimensional guess.
SubspaceGuess random_guess(const BaseField& f, uint32_t dim, uint32_t ambient, Rng& rng);

/// Generator of the query code punctured at file `index`: the transpose
/// of the query matrix with that file's delta-row block removed,
/// an n x (m-1)delta matrix. Throws IndexOutOfRange for a bad index and
/// DimensionMismatch when m == 1 (nothing remains).
MatExt puncture_file(const ExtField& f, const Query& query, uint32_t index);

/// Basis of the dual of the punctured code, one vector per row.
MatExt dual_basis(const ExtField& f, const MatExt& punctured_gen);

/// F_q-dimension of the subspace subcode: codewords of the punctured code
/// all of whose coordinates lie in the guessed space.
int64_t subspace_subcode_dim(const ExtField& f, const MatExt& punctured_gen,
                             const SubspaceGuess& guess);

/// Runs the distinguisher for every file index; recovered_index is set
/// iff exactly one file has a nonzero subcode.
AttackVerdict subspace_attack(const ExtField& f, const Query& query,
                              const SubspaceGuess& guess);

struct GuessRateResult {
    uint64_t trials = 0;
    uint64_t hits = 0;
    double rate = 0.0;
};

/// Samples uniform (s-1)-dimensional subspaces and counts how many
/// contain a fixed uniformly drawn noise space of dimension v.
GuessRateResult estimate_superspace_hit_rate(const SchemeParams& params, uint64_t trials,
                                             Rng& rng);

struct RankExperimentResult {
    uint64_t trials = 0;
    double freq_excluding = 0.0; // submatrices avoiding the queried file's rows
    double freq_including = 0.0; // submatrices touching them
};

/// Builds fresh queries and measures how often a random n x n row
/// submatrix has full rank, separately for row sets avoiding and touching
/// the queried file's block. Throws InvalidParams when the non-file rows
/// cannot supply n rows.
RankExperimentResult ld_rank_experiment(const SchemeParams& params, uint64_t trials,
                                        Rng& rng);

} // namespace cpir
