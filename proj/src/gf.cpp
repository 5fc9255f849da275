#include "cpir/gf.hpp"

#include <algorithm>
#include <array>

namespace cpir {

namespace {

// Degree of a polynomial given as coefficient vector; -1 for zero.
int poly_degree(std::span<const uint8_t> p) {
    for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
        if (p[static_cast<size_t>(i)] != 0) return i;
    return -1;
}

std::vector<uint8_t> poly_trim(std::vector<uint8_t> p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
    return p;
}

std::vector<uint8_t> poly_add(const BaseField& f, std::span<const uint8_t> a,
                              std::span<const uint8_t> b) {
    std::vector<uint8_t> out(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) out[i] = f.add(out[i], b[i]);
    return poly_trim(std::move(out));
}

std::vector<uint8_t> poly_mul(const BaseField& f, std::span<const uint8_t> a,
                              std::span<const uint8_t> b) {
    if (a.empty() || b.empty()) return {};
    std::vector<uint8_t> out(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j)
            out[i + j] = f.add(out[i + j], f.mul(a[i], b[j]));
    }
    return poly_trim(std::move(out));
}

// Remainder of a modulo m (m nonzero).
std::vector<uint8_t> poly_mod(const BaseField& f, std::vector<uint8_t> a,
                              std::span<const uint8_t> m) {
    int dm = poly_degree(m);
    uint8_t lead_inv = f.inv(m[static_cast<size_t>(dm)]);
    int da = poly_degree(a);
    while (da >= dm) {
        uint8_t factor = f.mul(a[static_cast<size_t>(da)], lead_inv);
        int shift = da - dm;
        for (int i = 0; i <= dm; ++i)
            a[static_cast<size_t>(i + shift)] =
                f.add(a[static_cast<size_t>(i + shift)], f.mul(factor, m[static_cast<size_t>(i)]));
        da = poly_degree(a);
    }
    a.resize(static_cast<size_t>(dm));
    return a;
}

std::vector<uint8_t> poly_mulmod(const BaseField& f, std::span<const uint8_t> a,
                                 std::span<const uint8_t> b, std::span<const uint8_t> m) {
    return poly_mod(f, poly_mul(f, a, b), m);
}

std::vector<uint8_t> poly_gcd(const BaseField& f, std::vector<uint8_t> a,
                              std::vector<uint8_t> b) {
    a = poly_trim(std::move(a));
    b = poly_trim(std::move(b));
    while (!b.empty()) {
        auto r = poly_mod(f, a, b);
        a = std::move(b);
        b = poly_trim(std::move(r));
    }
    // normalize to monic
    if (!a.empty()) {
        uint8_t li = f.inv(a.back());
        for (auto& c : a) c = f.mul(c, li);
    }
    return a;
}

// x^(q^j) mod m for j = 1..count, computed by iterated Frobenius (w
// squarings per step since q = 2^w).
std::vector<std::vector<uint8_t>> frobenius_powers(const BaseField& f,
                                                   std::span<const uint8_t> m,
                                                   uint32_t count) {
    std::vector<uint8_t> x{0, 1};
    std::vector<std::vector<uint8_t>> out;
    std::vector<uint8_t> t = poly_mod(f, x, m);
    for (uint32_t j = 0; j < count; ++j) {
        for (uint8_t i = 0; i < f.degree(); ++i) t = poly_mulmod(f, t, t, m);
        out.push_back(t);
    }
    return out;
}

} // namespace

BaseField::BaseField(uint8_t w, uint16_t modulus_mask) : w_(w), modulus_(modulus_mask) {
    if (w < 1 || w > 8) throw InvalidParams("base field degree w must be in [1, 8]");
    if ((modulus_mask >> w) != 1)
        throw InvalidParams("base field modulus must have degree exactly w");
    // Irreducibility over F_2: no roots and no factor of degree <= w/2.
    // Checked by trial division over all smaller-degree polynomials, which
    // is instant for w <= 8.
    for (uint32_t d = 1; d <= w / 2u; ++d) {
        for (uint32_t cand = (1u << d); cand < (2u << d); ++cand) {
            // carryless long division of modulus_mask by cand
            uint32_t rem = modulus_mask;
            while (true) {
                int rd = 31 - __builtin_clz(rem | 1);
                if (rem == 0 || rd < static_cast<int>(d)) break;
                rem ^= cand << (rd - static_cast<int>(d));
            }
            if (rem == 0 && cand != modulus_mask)
                throw InvalidParams("base field modulus is reducible over F_2");
        }
    }
}

uint16_t BaseField::default_modulus(uint8_t w) {
    // x+1, x^2+x+1, x^3+x+1, x^4+x+1, x^5+x^2+1, x^6+x+1, x^7+x+1,
    // x^8+x^4+x^3+x+1
    static constexpr std::array<uint16_t, 9> table = {0,     0b11,     0b111,     0b1011,
                                                      0b10011, 0b100101, 0b1000011, 0b10000011,
                                                      0b100011011};
    if (w < 1 || w > 8) throw InvalidParams("base field degree w must be in [1, 8]");
    return table[w];
}

BaseField BaseField::with_default_modulus(uint8_t w) {
    return BaseField(w, default_modulus(w));
}

uint8_t BaseField::mul(uint8_t a, uint8_t b) const {
    uint32_t acc = 0;
    uint32_t aa = a;
    uint32_t bb = b;
    while (bb != 0) {
        if (bb & 1) acc ^= aa;
        bb >>= 1;
        aa <<= 1;
        if (aa & (1u << w_)) aa ^= modulus_;
    }
    return static_cast<uint8_t>(acc);
}

uint8_t BaseField::pow(uint8_t a, uint64_t e) const {
    uint8_t result = 1;
    uint8_t base = a;
    while (e != 0) {
        if (e & 1) result = mul(result, base);
        base = mul(base, base);
        e >>= 1;
    }
    return result;
}

uint8_t BaseField::inv(uint8_t a) const {
    if (a == 0) throw DivisionByZero();
    return pow(a, static_cast<uint64_t>(order()) - 2);
}

ExtField::ExtField(BaseField base, uint32_t s, std::vector<uint8_t> modulus)
    : base_(base), s_(s), modulus_(std::move(modulus)) {
    if (s_ < 1) throw InvalidParams("extension degree must be at least 1");
    if (modulus_.size() != s_ + 1 || modulus_.back() != 1)
        throw InvalidParams("extension modulus must be monic of degree s");
    for (uint8_t c : modulus_)
        if (c >= base_.order()) throw InvalidParams("modulus coefficient out of field range");
    if (!is_irreducible(base_, modulus_))
        throw InvalidParams("extension modulus is reducible over the base field");
}

ExtField ExtField::with_random_modulus(BaseField base, uint32_t s, Rng& rng) {
    if (s == 1) return ExtField(base, 1, {0, 1}); // degree-1 moduli are all irreducible
    return ExtField(base, s, find_irreducible(base, s, rng));
}

ExtElem ExtField::one() const {
    ExtElem e = zero();
    e.coeffs[0] = 1;
    return e;
}

ExtElem ExtField::monomial(uint32_t deg) const {
    ExtElem e = zero();
    e.coeffs.at(deg) = 1;
    return e;
}

ExtElem ExtField::embed(uint8_t b) const {
    ExtElem e = zero();
    e.coeffs[0] = b;
    return e;
}

bool ExtField::is_zero(const ExtElem& a) const {
    for (uint8_t c : a.coeffs)
        if (c != 0) return false;
    return true;
}

ExtElem ExtField::add(const ExtElem& a, const ExtElem& b) const {
    ExtElem out = a;
    for (uint32_t i = 0; i < s_; ++i) out.coeffs[i] ^= b.coeffs[i];
    return out;
}

ExtElem ExtField::mul(const ExtElem& a, const ExtElem& b) const {
    // schoolbook product, then reduction by the monic modulus
    std::vector<uint8_t> prod(2 * s_ - 1, 0);
    for (uint32_t i = 0; i < s_; ++i) {
        if (a.coeffs[i] == 0) continue;
        for (uint32_t j = 0; j < s_; ++j)
            prod[i + j] = base_.add(prod[i + j], base_.mul(a.coeffs[i], b.coeffs[j]));
    }
    for (uint32_t i = 2 * s_ - 2; i >= s_ && i < prod.size(); --i) {
        uint8_t c = prod[i];
        if (c == 0) continue;
        prod[i] = 0;
        for (uint32_t j = 0; j < s_; ++j)
            prod[i - s_ + j] = base_.add(prod[i - s_ + j], base_.mul(c, modulus_[j]));
    }
    prod.resize(s_);
    return ExtElem{std::move(prod)};
}

ExtElem ExtField::inv(const ExtElem& a) const {
    if (is_zero(a)) throw DivisionByZero();
    // extended Euclid over F_q[x]: r0 = modulus, r1 = a
    std::vector<uint8_t> r0 = modulus_;
    std::vector<uint8_t> r1 = poly_trim(a.coeffs);
    std::vector<uint8_t> t0;       // 0
    std::vector<uint8_t> t1 = {1}; // 1
    while (poly_degree(r1) > 0) {
        // quotient of r0 by r1, one leading term at a time
        int d0 = poly_degree(r0);
        int d1 = poly_degree(r1);
        std::vector<uint8_t> q(static_cast<size_t>(d0 - d1) + 1, 0);
        std::vector<uint8_t> rem = r0;
        uint8_t lead_inv = base_.inv(r1[static_cast<size_t>(d1)]);
        int dr = d0;
        while (dr >= d1) {
            uint8_t factor = base_.mul(rem[static_cast<size_t>(dr)], lead_inv);
            q[static_cast<size_t>(dr - d1)] = factor;
            for (int i = 0; i <= d1; ++i)
                rem[static_cast<size_t>(i + dr - d1)] = base_.add(
                    rem[static_cast<size_t>(i + dr - d1)], base_.mul(factor, r1[static_cast<size_t>(i)]));
            dr = poly_degree(rem);
        }
        rem = poly_trim(std::move(rem));
        auto t2 = poly_add(base_, t0, poly_mul(base_, q, t1));
        r0 = std::move(r1);
        r1 = std::move(rem);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r1.empty()) throw DivisionByZero(); // gcd(a, modulus) != 1 cannot happen for irreducible modulus
    // r1 is a nonzero constant; divide it out
    uint8_t c_inv = base_.inv(r1[0]);
    ExtElem out = zero();
    for (size_t i = 0; i < t1.size() && i < s_; ++i) out.coeffs[i] = base_.mul(t1[i], c_inv);
    return out;
}

ExtElem ExtField::scalar_mul(const ExtElem& a, uint8_t b) const {
    ExtElem out = zero();
    for (uint32_t i = 0; i < s_; ++i) out.coeffs[i] = base_.mul(a.coeffs[i], b);
    return out;
}

void ExtField::add_scaled(ExtElem& a, const ExtElem& b, uint8_t scalar) const {
    if (scalar == 0) return;
    for (uint32_t i = 0; i < s_; ++i) a.coeffs[i] ^= base_.mul(b.coeffs[i], scalar);
}

ExtElem ExtField::random_elem(Rng& rng) const {
    ExtElem e = zero();
    for (uint32_t i = 0; i < s_; ++i) e.coeffs[i] = base_.random_elem(rng);
    return e;
}

bool is_irreducible(const BaseField& base, std::span<const uint8_t> poly) {
    int deg = poly_degree(poly);
    if (deg < 1) return false;
    auto s = static_cast<uint32_t>(deg);
    if (s == 1) return true;
    auto frob = frobenius_powers(base, poly, s);
    // x^(q^s) == x mod poly
    std::vector<uint8_t> x = {0, 1};
    if (poly_trim(frob[s - 1]) != x) return false;
    // gcd(x^(q^(s/p)) - x, poly) == 1 for every prime p | s
    for (uint32_t p = 2; p <= s; ++p) {
        if (s % p != 0) continue;
        bool prime = true;
        for (uint32_t d = 2; d * d <= p; ++d)
            if (p % d == 0) prime = false;
        if (!prime) continue;
        auto diff = poly_add(base, frob[s / p - 1], x); // char 2: subtraction is addition
        auto g = poly_gcd(base, std::vector<uint8_t>(poly.begin(), poly.end()), diff);
        if (poly_degree(g) != 0) return false;
    }
    return true;
}

std::vector<uint8_t> find_irreducible(const BaseField& base, uint32_t s, Rng& rng) {
    if (s < 2) throw InvalidParams("find_irreducible requires degree >= 2");
    for (;;) {
        std::vector<uint8_t> cand(s + 1, 0);
        cand[s] = 1;
        for (uint32_t i = 0; i < s; ++i) cand[i] = base.random_elem(rng);
        if (cand[0] == 0) continue; // zero constant term is always reducible
        if (is_irreducible(base, cand)) return cand;
    }
}

} // namespace cpir
