#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cpir/gf.hpp"

namespace cpir {

/// Dense row-major matrix over the base field.
struct MatBase {
    uint32_t rows = 0;
    uint32_t cols = 0;
    std::vector<uint8_t> a;

    MatBase() = default;
    MatBase(uint32_t r, uint32_t c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0) {}

    uint8_t& at(uint32_t r, uint32_t c) { return a[static_cast<size_t>(r) * cols + c]; }
    uint8_t at(uint32_t r, uint32_t c) const { return a[static_cast<size_t>(r) * cols + c]; }

    bool operator==(const MatBase& other) const = default;
};

/// Dense row-major matrix over the extension field.
struct MatExt {
    uint32_t rows = 0;
    uint32_t cols = 0;
    std::vector<ExtElem> a;

    MatExt() = default;
    MatExt(uint32_t r, uint32_t c, const ExtField& field)
        : rows(r), cols(c), a(static_cast<size_t>(r) * c, field.zero()) {}

    static MatExt zeros(uint32_t r, uint32_t c, uint32_t ext_degree) {
        MatExt m;
        m.rows = r;
        m.cols = c;
        m.a.assign(static_cast<size_t>(r) * c, ExtElem{std::vector<uint8_t>(ext_degree, 0)});
        return m;
    }

    ExtElem& at(uint32_t r, uint32_t c) { return a[static_cast<size_t>(r) * cols + c]; }
    const ExtElem& at(uint32_t r, uint32_t c) const {
        return a[static_cast<size_t>(r) * cols + c];
    }

    bool operator==(const MatExt& other) const = default;
};

MatBase transpose(const MatBase& m);
MatExt transpose(const MatExt& m);

MatBase add(const BaseField& f, const MatBase& x, const MatBase& y);
MatExt add(const ExtField& f, const MatExt& x, const MatExt& y);

MatBase matmul(const BaseField& f, const MatBase& x, const MatBase& y);
MatExt matmul(const ExtField& f, const MatExt& x, const MatExt& y);

/// Product of a base-field matrix with an extension-field matrix. Uses
/// only subfield scalar multiplications, so it never touches the
/// extension modulus; the server side needs nothing more than this.
MatExt mixed_mul(const BaseField& base, uint32_t ext_degree, const MatBase& x,
                 const MatExt& q);

uint32_t rank(const BaseField& f, const MatBase& m);
uint32_t rank(const ExtField& f, const MatExt& m);

/// Inverse of a square matrix; throws Singular when rank-deficient.
MatBase inverse(const BaseField& f, const MatBase& m);
MatExt inverse(const ExtField& f, const MatExt& m);

/// Basis of {x : M x^T = 0}, one kernel vector per row. The returned
/// matrix has cols(M) columns and cols(M) - rank(M) rows.
MatBase right_kernel(const BaseField& f, const MatBase& m);
MatExt right_kernel(const ExtField& f, const MatExt& m);

/// Solves x * m = y for a row vector x; m must be square invertible.
std::vector<uint8_t> solve_left(const BaseField& f, const MatBase& m,
                                std::span<const uint8_t> y);

/// Expansion of an extension matrix to base-field coordinates in the
/// polynomial basis. Row variant stacks the s coordinate rows of every
/// entry: (a x b) -> (s*a x b). Column variant lays the s coordinates out
/// along the row: (a x b) -> (a x s*b).
MatBase expand_rows(const ExtField& f, const MatExt& m);
MatBase expand_cols(const ExtField& f, const MatExt& m);

/// F_q-rank of an extension matrix viewed as a map between F_q-vector
/// spaces (rank of the column expansion).
uint32_t rank_over_base(const ExtField& f, const MatExt& m);

} // namespace cpir
