#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cpir/bigint.hpp"
#include "cpir/pir.hpp"

namespace cpir {

/// Query size in bits: m * delta * n * s * log2(q).
uint64_t upload_bits(const SchemeParams& p);
/// Response size in bits: L * n * s * log2(q).
uint64_t download_bits(const SchemeParams& p);

/// Retrieval rate including upload cost:
/// L / (m*delta + L) * (1 - (k + (v/s)(n-k)) / n).
BigRational rate_exact(const SchemeParams& p);

/// Rate for files much longer than the query, upload cost ignored:
/// 1 - (k + (v/s)(n-k)) / n = delta / (n*s).
BigRational rate_asymptotic(const SchemeParams& p);

/// Number of v-dimensional F_q-subspaces of an s-dimensional space.
BigInt gaussian_binomial(uint32_t s, uint32_t v, uint32_t q);

/// Number of z-dimensional subspaces containing a fixed v-dimensional
/// subspace: gaussian_binomial(s - v, z - v, q).
BigInt superspace_count(uint32_t s, uint32_t v, uint32_t z, uint32_t q);

/// Probability that a uniformly random (s-1)-dimensional subspace
/// contains a fixed v-dimensional one.
BigRational superspace_hit_prob(uint32_t s, uint32_t v, uint32_t q);

/// log2 of the expected number of uniform (s-1)-dimensional guesses until
/// one contains the hidden noise space; the work factor of the
/// superspace-guessing strategy.
double ss_workfactor_log2(uint32_t s, uint32_t v, uint32_t q);

/// Lower bound on the probability that an n x n submatrix of the query,
/// avoiding the queried file's row block, has full rank over F_{q^s}.
/// Stated for the regime where the noise space is a subfield (v | s).
/// Evaluated with exact rationals and reported as a double.
double ld_rank_bound(uint32_t q, uint32_t s, uint32_t n, uint32_t k);
BigRational ld_rank_bound_exact(uint32_t q, uint32_t s, uint32_t n, uint32_t k);

/// Expected dimension of the subspace subcode of a punctured query code
/// when everything is random: max{(m-1)delta - ((m-1)delta - n)s, 0}.
int64_t expected_subcode_dim(uint64_t m, uint64_t delta, uint64_t n, uint64_t s);

/// log2 of the field size whose single multiplication costs as much as
/// one server-side scalar multiplication: sqrt(s) * log2(q).
double equiv_field_log2(uint32_t q, uint32_t s);

struct TableRow {
    uint32_t q = 0, s = 0, v = 0, n = 0, k = 0;
    uint64_t delta = 0;
    BigRational rate;
    double ss_log2 = 0.0;
};

/// Evaluates delta, asymptotic rate and subspace-attack work factor for
/// each (q, s, v, n, k) tuple.
std::vector<TableRow> build_table(const std::vector<std::array<uint32_t, 5>>& rows);

/// The six built-in reference parameter sets.
const std::vector<std::array<uint32_t, 5>>& reference_param_sets();

/// Reported linear-dependency work factors for the reference sets, as
/// published; no formula reproduces them, so they are display-only.
const std::vector<std::string>& reference_ld_workfactors();

struct SweepPoint {
    uint32_t v = 0;
    double ss_log2 = 0.0;
    double ld_bound = 0.0;
};

/// Attack quantities for v over [v_lo, v_hi], fixed q, s, n, k.
std::vector<SweepPoint> attack_sweep(uint32_t q, uint32_t s, uint32_t n, uint32_t k,
                                     uint32_t v_lo, uint32_t v_hi);

/// CSV with header "v,ss_log2,ld_bound".
void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points);

} // namespace cpir
