#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cpir/errors.hpp"
#include "cpir/rng.hpp"

namespace cpir {

/// Binary base field F_q with q = 2^w, 1 <= w <= 8. Elements are uint8_t
/// values below q, read as F_2-polynomials of degree < w. Arithmetic is
/// carryless shift-and-XOR multiplication reduced by the field modulus.
class BaseField {
public:
    /// modulus_mask is the full bit mask of the degree-w irreducible
    /// modulus including the x^w term, e.g. 0b10011 for x^4+x+1.
    BaseField(uint8_t w, uint16_t modulus_mask);

    /// Field with the fixed per-degree default modulus, so serialized
    /// data is portable between builds.
    static BaseField with_default_modulus(uint8_t w);

    static uint16_t default_modulus(uint8_t w);

    uint8_t degree() const { return w_; }
    uint16_t order() const { return uint16_t{1} << w_; }
    uint16_t modulus() const { return modulus_; }

    uint8_t add(uint8_t a, uint8_t b) const { return a ^ b; }
    uint8_t mul(uint8_t a, uint8_t b) const;
    uint8_t pow(uint8_t a, uint64_t e) const;
    uint8_t inv(uint8_t a) const; // throws DivisionByZero on a == 0

    uint8_t random_elem(Rng& rng) const {
        return static_cast<uint8_t>(rng.below(order()));
    }

    bool operator==(const BaseField& other) const = default;

private:
    uint8_t w_;
    uint16_t modulus_;
};

/// Element of the extension field: s base-field coefficients in the
/// polynomial basis, lowest degree first.
struct ExtElem {
    std::vector<uint8_t> coeffs;

    bool operator==(const ExtElem& other) const = default;
};

/// Extension field F_{q^s} = F_q[x]/(modulus), with a monic degree-s
/// modulus irreducible over F_q. The polynomial basis is the canonical
/// representation everywhere; secret bases are a change of coordinates on
/// top of it, never a change of representation.
class ExtField {
public:
    /// modulus holds s+1 coefficients, lowest degree first; the leading
    /// coefficient must be 1. Irreducibility is verified.
    ExtField(BaseField base, uint32_t s, std::vector<uint8_t> modulus);

    /// Field with a seeded random irreducible modulus.
    static ExtField with_random_modulus(BaseField base, uint32_t s, Rng& rng);

    const BaseField& base() const { return base_; }
    uint32_t extension_degree() const { return s_; }
    const std::vector<uint8_t>& modulus() const { return modulus_; }

    ExtElem zero() const { return ExtElem{std::vector<uint8_t>(s_, 0)}; }
    ExtElem one() const;
    /// x^deg as a field element (deg < s).
    ExtElem monomial(uint32_t deg) const;
    /// Base-field element as a constant extension element.
    ExtElem embed(uint8_t b) const;

    bool is_zero(const ExtElem& a) const;

    ExtElem add(const ExtElem& a, const ExtElem& b) const;
    ExtElem mul(const ExtElem& a, const ExtElem& b) const;
    ExtElem inv(const ExtElem& a) const; // throws DivisionByZero on a == 0

    /// Coefficient-wise multiplication by a base-field scalar. Equal to
    /// mul(a, embed(b)) but costs only s base multiplications.
    ExtElem scalar_mul(const ExtElem& a, uint8_t b) const;

    /// In-place a += scalar * b, the inner loop of mixed matrix products.
    void add_scaled(ExtElem& a, const ExtElem& b, uint8_t scalar) const;

    ExtElem random_elem(Rng& rng) const;

    bool operator==(const ExtField& other) const = default;

private:
    BaseField base_;
    uint32_t s_;
    std::vector<uint8_t> modulus_;
};

/// Deterministic irreducibility test for a monic polynomial over F_q
/// (Rabin's criterion via iterated Frobenius powers).
bool is_irreducible(const BaseField& base, std::span<const uint8_t> poly);

/// Seeded random search for a monic degree-s polynomial irreducible over
/// F_q. Returns s+1 coefficients, lowest degree first.
std::vector<uint8_t> find_irreducible(const BaseField& base, uint32_t s, Rng& rng);

} // namespace cpir
