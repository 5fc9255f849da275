#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cpir/linalg.hpp"

namespace cpir {

/// Random [n, k] linear code over the extension field, held by its
/// generator matrix.
struct LinearCode {
    uint32_t n = 0;
    uint32_t k = 0;
    MatExt gen; // k x n, rank k
};

/// An information set of a code: k column indices on which the generator
/// restricts to an invertible matrix, plus that inverse. Codeword values
/// on the set determine the whole codeword.
struct InfoSet {
    std::vector<uint32_t> info;    // sorted, size k
    std::vector<uint32_t> erasure; // sorted complement, size n - k
    MatExt gen_info_inv;           // inverse of gen restricted to info columns
};

inline constexpr uint32_t kInfoSetRetryLimit = 100;

/// Generator matrix uniform over rank-k matrices, by rejection on rank.
LinearCode sample_code(const ExtField& f, uint32_t n, uint32_t k, Rng& rng);

/// Uniformly random k-subset, retried until it is an information set.
/// Throws RetryLimitExceeded after kInfoSetRetryLimit failures, which
/// indicates a degenerate code.
InfoSet pick_information_set(const ExtField& f, const LinearCode& code, Rng& rng);

/// Rebuild an InfoSet from stored indices, validating invertibility.
InfoSet info_set_from_indices(const ExtField& f, const LinearCode& code,
                              std::vector<uint32_t> info);

/// Uniform codeword: u * gen with u uniform in F_{q^s}^k.
std::vector<ExtElem> sample_codeword(const ExtField& f, const LinearCode& code, Rng& rng);

/// The unique codeword agreeing with values_on_info on the information
/// set, all n positions.
std::vector<ExtElem> erasure_decode(const ExtField& f, const LinearCode& code,
                                    const InfoSet& iset,
                                    std::span<const ExtElem> values_on_info);

} // namespace cpir
