#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace cpir {

/// Signed arbitrary-precision integer, base 2^32 magnitude limbs. Covers
/// exactly what the closed-form analysis needs: the q^{sj} terms in the
/// probability products overflow any fixed width long before the
/// parameter sizes of interest.
class BigInt {
public:
    BigInt() = default;
    BigInt(int64_t value);
    static BigInt from_u64(uint64_t value);
    static BigInt pow2(uint64_t exponent);
    static BigInt pow(const BigInt& base, uint64_t exponent);

    bool is_zero() const { return sign_ == 0; }
    bool is_negative() const { return sign_ < 0; }
    int sign() const { return sign_; }
    BigInt abs() const;
    BigInt negate() const;

    BigInt operator+(const BigInt& other) const;
    BigInt operator-(const BigInt& other) const;
    BigInt operator*(const BigInt& other) const;
    /// Quotient truncated toward zero; remainder has the dividend's sign.
    BigInt operator/(const BigInt& other) const;
    BigInt operator%(const BigInt& other) const;

    BigInt operator<<(uint64_t bits) const;
    BigInt operator>>(uint64_t bits) const;

    std::strong_ordering operator<=>(const BigInt& other) const;
    bool operator==(const BigInt& other) const;

    /// Number of bits in the magnitude; 0 for zero.
    uint64_t bit_length() const;
    /// Largest e with 2^e dividing the value (0 for zero).
    uint64_t trailing_zero_bits() const;

    static BigInt gcd(BigInt a, BigInt b);

    /// log2 of the magnitude as a double; meaningful only for nonzero.
    double log2_abs() const;
    double to_double() const;
    std::string to_string() const;

private:
    int sign_ = 0;
    std::vector<uint32_t> mag_; // little-endian, normalized (no trailing zero limbs)

    void normalize();
    static int cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
    static std::vector<uint32_t> add_mag(const std::vector<uint32_t>& a,
                                         const std::vector<uint32_t>& b);
    static std::vector<uint32_t> sub_mag(const std::vector<uint32_t>& a,
                                         const std::vector<uint32_t>& b);
    static std::vector<uint32_t> mul_mag(const std::vector<uint32_t>& a,
                                         const std::vector<uint32_t>& b);
    static void divmod_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                           std::vector<uint32_t>& quot, std::vector<uint32_t>& rem);
};

/// Exact rational with canonical reduced form and positive denominator.
class BigRational {
public:
    BigRational() : num_(0), den_(1) {}
    BigRational(BigInt numerator, BigInt denominator);
    BigRational(int64_t numerator, int64_t denominator = 1);

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_negative() const { return num_.is_negative(); }

    BigRational operator+(const BigRational& other) const;
    BigRational operator-(const BigRational& other) const;
    BigRational operator*(const BigRational& other) const;
    BigRational operator/(const BigRational& other) const;

    std::strong_ordering operator<=>(const BigRational& other) const;
    bool operator==(const BigRational& other) const;

    double to_double() const;
    /// log2 of the value; requires a positive value.
    double log2() const;
    /// "num/den", or just "num" when den == 1.
    std::string to_string() const;

private:
    BigInt num_;
    BigInt den_;

    void reduce();
};

} // namespace cpir
