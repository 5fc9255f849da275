#include "cpir/subspace.hpp"

namespace cpir {

SplitBasis sample_split_basis(const ExtField& f, uint32_t noise_dim, Rng& rng) {
    uint32_t s = f.extension_degree();
    if (noise_dim == 0 || noise_dim >= s)
        throw InvalidParams("basis split point must satisfy 0 < v < s");
    const BaseField& base = f.base();
    for (;;) {
        MatBase b(s, s);
        for (auto& e : b.a) e = base.random_elem(rng);
        if (rank(base, b) != s) continue;
        return SplitBasis{b, inverse(base, b), noise_dim};
    }
}

SplitBasis split_basis_from_rows(const ExtField& f, MatBase rows, uint32_t noise_dim) {
    uint32_t s = f.extension_degree();
    if (rows.rows != s || rows.cols != s)
        throw DimensionMismatch("basis matrix must be s x s");
    if (noise_dim == 0 || noise_dim >= s)
        throw InvalidParams("basis split point must satisfy 0 < v < s");
    MatBase inv = inverse(f.base(), rows); // throws Singular on a bad basis
    return SplitBasis{std::move(rows), std::move(inv), noise_dim};
}

std::vector<uint8_t> basis_coords(const ExtField& f, const SplitBasis& basis,
                                  const ExtElem& a) {
    uint32_t s = f.extension_degree();
    const BaseField& base = f.base();
    std::vector<uint8_t> out(s, 0);
    for (uint32_t c = 0; c < s; ++c) {
        uint8_t acc = 0;
        for (uint32_t t = 0; t < s; ++t)
            acc = base.add(acc, base.mul(a.coeffs[t], basis.inv.at(t, c)));
        out[c] = acc;
    }
    return out;
}

ExtElem from_basis_coords(const ExtField& f, const SplitBasis& basis,
                          std::span<const uint8_t> coords) {
    uint32_t s = f.extension_degree();
    if (coords.size() != s) throw DimensionMismatch("coordinate vector length mismatch");
    const BaseField& base = f.base();
    ExtElem out = f.zero();
    for (uint32_t t = 0; t < s; ++t) {
        if (coords[t] == 0) continue;
        for (uint32_t c = 0; c < s; ++c)
            out.coeffs[c] = base.add(out.coeffs[c], base.mul(coords[t], basis.rows.at(t, c)));
    }
    return out;
}

ExtElem payload_part(const ExtField& f, const SplitBasis& basis, const ExtElem& a) {
    auto coords = basis_coords(f, basis, a);
    for (uint32_t j = 0; j < basis.noise_dim; ++j) coords[j] = 0;
    return from_basis_coords(f, basis, coords);
}

ExtElem sample_part_elem(const ExtField& f, const SplitBasis& basis, Part part, Rng& rng) {
    uint32_t s = f.extension_degree();
    std::vector<uint8_t> coords(s, 0);
    uint32_t lo = part == Part::noise ? 0 : basis.noise_dim;
    uint32_t hi = part == Part::noise ? basis.noise_dim : s;
    for (uint32_t j = lo; j < hi; ++j) coords[j] = f.base().random_elem(rng);
    return from_basis_coords(f, basis, coords);
}

MatBase part_rows(const SplitBasis& basis, Part part) {
    uint32_t lo = part == Part::noise ? 0 : basis.noise_dim;
    uint32_t hi = part == Part::noise ? basis.noise_dim : basis.dim();
    MatBase out(hi - lo, basis.dim());
    for (uint32_t r = lo; r < hi; ++r)
        for (uint32_t c = 0; c < basis.dim(); ++c) out.at(r - lo, c) = basis.rows.at(r, c);
    return out;
}

MatBase sample_subspace(const BaseField& f, uint32_t dim, uint32_t ambient, Rng& rng) {
    if (dim > ambient) throw InvalidParams("subspace dimension exceeds ambient dimension");
    for (;;) {
        MatBase b(dim, ambient);
        for (auto& e : b.a) e = f.random_elem(rng);
        if (rank(f, b) == dim) return b;
    }
}

bool space_contains(const BaseField& f, const MatBase& space, const MatBase& vectors) {
    if (space.cols != vectors.cols) throw DimensionMismatch("ambient dimension mismatch");
    MatBase stacked(space.rows + vectors.rows, space.cols);
    for (uint32_t r = 0; r < space.rows; ++r)
        for (uint32_t c = 0; c < space.cols; ++c) stacked.at(r, c) = space.at(r, c);
    for (uint32_t r = 0; r < vectors.rows; ++r)
        for (uint32_t c = 0; c < space.cols; ++c)
            stacked.at(space.rows + r, c) = vectors.at(r, c);
    return rank(f, stacked) == rank(f, space);
}

} // namespace cpir
