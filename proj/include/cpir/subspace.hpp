#pragma once

#include <cstdint>
#include <span>

#include "cpir/linalg.hpp"

namespace cpir {

/// A random basis of F_{q^s} over F_q, split at noise_dim: rows
/// [0, noise_dim) span the noise space and rows [noise_dim, s) the payload
/// space. Every extension element decomposes uniquely into a noise part
/// plus a payload part.
struct SplitBasis {
    MatBase rows;       // s x s over F_q; row j = basis element j in polynomial coords
    MatBase inv;        // inverse of rows
    uint32_t noise_dim; // 0 < noise_dim < s

    uint32_t dim() const { return rows.rows; }
    uint32_t payload_dim() const { return dim() - noise_dim; }
};

enum class Part { noise, payload };

/// Uniformly random invertible basis matrix, by rejection on rank.
SplitBasis sample_split_basis(const ExtField& f, uint32_t noise_dim, Rng& rng);

/// Rebuild the inverse for a basis loaded from its row matrix.
SplitBasis split_basis_from_rows(const ExtField& f, MatBase rows, uint32_t noise_dim);

/// Coordinates of a in the split basis; from_basis_coords is its inverse.
std::vector<uint8_t> basis_coords(const ExtField& f, const SplitBasis& basis,
                                  const ExtElem& a);
ExtElem from_basis_coords(const ExtField& f, const SplitBasis& basis,
                          std::span<const uint8_t> coords);

/// Projection keeping only the payload-space coordinates of a (the noise
/// coordinates are zeroed). F_q-linear and idempotent.
ExtElem payload_part(const ExtField& f, const SplitBasis& basis, const ExtElem& a);

/// Uniform element of the chosen half of the basis split.
ExtElem sample_part_elem(const ExtField& f, const SplitBasis& basis, Part part, Rng& rng);

/// Basis of the noise (resp. payload) space as rows in polynomial coords.
MatBase part_rows(const SplitBasis& basis, Part part);

/// Uniformly random dim-dimensional subspace of F_q^ambient, returned as
/// dim independent basis rows (rejection on rank).
MatBase sample_subspace(const BaseField& f, uint32_t dim, uint32_t ambient, Rng& rng);

/// True when every row of vectors lies in the row space of space.
bool space_contains(const BaseField& f, const MatBase& space, const MatBase& vectors);

} // namespace cpir
