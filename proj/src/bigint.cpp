#include "cpir/bigint.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cpir/errors.hpp"

namespace cpir {

namespace {
constexpr uint64_t kBase = uint64_t{1} << 32;
}

BigInt::BigInt(int64_t value) {
    if (value == 0) return;
    sign_ = value < 0 ? -1 : 1;
    uint64_t mag = value < 0 ? -static_cast<uint64_t>(value) : static_cast<uint64_t>(value);
    mag_.push_back(static_cast<uint32_t>(mag));
    if (mag >> 32) mag_.push_back(static_cast<uint32_t>(mag >> 32));
}

BigInt BigInt::from_u64(uint64_t value) {
    BigInt out;
    if (value == 0) return out;
    out.sign_ = 1;
    out.mag_.push_back(static_cast<uint32_t>(value));
    if (value >> 32) out.mag_.push_back(static_cast<uint32_t>(value >> 32));
    return out;
}

BigInt BigInt::pow2(uint64_t exponent) {
    BigInt out;
    out.sign_ = 1;
    out.mag_.assign(exponent / 32 + 1, 0);
    out.mag_.back() = uint32_t{1} << (exponent % 32);
    return out;
}

BigInt BigInt::pow(const BigInt& base, uint64_t exponent) {
    BigInt result(1);
    BigInt acc = base;
    while (exponent != 0) {
        if (exponent & 1) result = result * acc;
        exponent >>= 1;
        if (exponent != 0) acc = acc * acc;
    }
    return result;
}

void BigInt::normalize() {
    while (!mag_.empty() && mag_.back() == 0) mag_.pop_back();
    if (mag_.empty()) sign_ = 0;
}

BigInt BigInt::abs() const {
    BigInt out = *this;
    if (out.sign_ < 0) out.sign_ = 1;
    return out;
}

BigInt BigInt::negate() const {
    BigInt out = *this;
    out.sign_ = -out.sign_;
    return out;
}

int BigInt::cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (size_t i = a.size(); i-- > 0;)
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    return 0;
}

std::vector<uint32_t> BigInt::add_mag(const std::vector<uint32_t>& a,
                                      const std::vector<uint32_t>& b) {
    const auto& big = a.size() >= b.size() ? a : b;
    const auto& small = a.size() >= b.size() ? b : a;
    std::vector<uint32_t> out(big.size() + 1, 0);
    uint64_t carry = 0;
    for (size_t i = 0; i < big.size(); ++i) {
        uint64_t sum = carry + big[i] + (i < small.size() ? small[i] : 0);
        out[i] = static_cast<uint32_t>(sum);
        carry = sum >> 32;
    }
    out[big.size()] = static_cast<uint32_t>(carry);
    while (!out.empty() && out.back() == 0) out.pop_back();
    return out;
}

std::vector<uint32_t> BigInt::sub_mag(const std::vector<uint32_t>& a,
                                      const std::vector<uint32_t>& b) {
    // requires |a| >= |b|
    std::vector<uint32_t> out(a.size(), 0);
    int64_t borrow = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        int64_t diff = static_cast<int64_t>(a[i]) - (i < b.size() ? b[i] : 0) - borrow;
        if (diff < 0) {
            diff += static_cast<int64_t>(kBase);
            borrow = 1;
        } else {
            borrow = 0;
        }
        out[i] = static_cast<uint32_t>(diff);
    }
    while (!out.empty() && out.back() == 0) out.pop_back();
    return out;
}

std::vector<uint32_t> BigInt::mul_mag(const std::vector<uint32_t>& a,
                                      const std::vector<uint32_t>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<uint32_t> out(a.size() + b.size(), 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        uint64_t carry = 0;
        uint64_t av = a[i];
        for (size_t j = 0; j < b.size(); ++j) {
            uint64_t cur = out[i + j] + av * b[j] + carry;
            out[i + j] = static_cast<uint32_t>(cur);
            carry = cur >> 32;
        }
        size_t pos = i + b.size();
        while (carry != 0) {
            uint64_t cur = out[pos] + carry;
            out[pos] = static_cast<uint32_t>(cur);
            carry = cur >> 32;
            ++pos;
        }
    }
    while (!out.empty() && out.back() == 0) out.pop_back();
    return out;
}

void BigInt::divmod_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                        std::vector<uint32_t>& quot, std::vector<uint32_t>& rem) {
    if (b.empty()) throw DivisionByZero();
    quot.clear();
    rem.clear();
    if (cmp_mag(a, b) < 0) {
        rem = a;
        return;
    }
    if (b.size() == 1) {
        uint64_t d = b[0];
        quot.assign(a.size(), 0);
        uint64_t r = 0;
        for (size_t i = a.size(); i-- > 0;) {
            uint64_t cur = (r << 32) | a[i];
            quot[i] = static_cast<uint32_t>(cur / d);
            r = cur % d;
        }
        while (!quot.empty() && quot.back() == 0) quot.pop_back();
        if (r != 0) rem.push_back(static_cast<uint32_t>(r));
        return;
    }

    // Knuth algorithm D. Normalize so the divisor's top limb has its high
    // bit set.
    int shift = 0;
    uint32_t top = b.back();
    while ((top & 0x80000000u) == 0) {
        top <<= 1;
        ++shift;
    }
    auto shl = [](const std::vector<uint32_t>& x, int s) {
        std::vector<uint32_t> out(x.size() + 1, 0);
        if (s == 0) {
            out.assign(x.begin(), x.end());
            out.push_back(0);
            return out;
        }
        for (size_t i = 0; i < x.size(); ++i) {
            out[i] |= x[i] << s;
            out[i + 1] |= static_cast<uint32_t>(static_cast<uint64_t>(x[i]) >> (32 - s));
        }
        return out;
    };
    std::vector<uint32_t> u = shl(a, shift); // length a.size() + 1
    std::vector<uint32_t> v = shl(b, shift);
    while (!v.empty() && v.back() == 0) v.pop_back();
    size_t n = v.size();
    size_t mlen = u.size() - n; // quotient has at most mlen limbs
    quot.assign(mlen, 0);
    uint64_t vtop = v[n - 1];
    uint64_t vsecond = n >= 2 ? v[n - 2] : 0;
    for (size_t j = mlen; j-- > 0;) {
        uint64_t numerator = (static_cast<uint64_t>(u[j + n]) << 32) | u[j + n - 1];
        uint64_t qhat = numerator / vtop;
        uint64_t rhat = numerator % vtop;
        if (qhat > 0xffffffffULL) {
            qhat = 0xffffffffULL;
            rhat = numerator - qhat * vtop;
        }
        while (rhat <= 0xffffffffULL &&
               qhat * vsecond > ((rhat << 32) | (j + n >= 2 ? u[j + n - 2] : 0))) {
            --qhat;
            rhat += vtop;
        }
        // u[j .. j+n] -= qhat * v
        int64_t borrow = 0;
        uint64_t carry = 0;
        for (size_t i = 0; i < n; ++i) {
            uint64_t prod = qhat * v[i] + carry;
            carry = prod >> 32;
            int64_t diff = static_cast<int64_t>(u[i + j]) - static_cast<int64_t>(prod & 0xffffffffULL) - borrow;
            if (diff < 0) {
                diff += static_cast<int64_t>(kBase);
                borrow = 1;
            } else {
                borrow = 0;
            }
            u[i + j] = static_cast<uint32_t>(diff);
        }
        int64_t diff = static_cast<int64_t>(u[j + n]) - static_cast<int64_t>(carry) - borrow;
        if (diff < 0) {
            // qhat was one too large; add v back
            diff += static_cast<int64_t>(kBase);
            --qhat;
            uint64_t c2 = 0;
            for (size_t i = 0; i < n; ++i) {
                uint64_t sum = static_cast<uint64_t>(u[i + j]) + v[i] + c2;
                u[i + j] = static_cast<uint32_t>(sum);
                c2 = sum >> 32;
            }
            diff += static_cast<int64_t>(c2);
            diff &= 0xffffffffLL;
        }
        u[j + n] = static_cast<uint32_t>(diff);
        quot[j] = static_cast<uint32_t>(qhat);
    }
    while (!quot.empty() && quot.back() == 0) quot.pop_back();
    // remainder = u[0 .. n) >> shift
    rem.assign(u.begin(), u.begin() + static_cast<long>(n));
    if (shift != 0) {
        for (size_t i = 0; i < rem.size(); ++i) {
            rem[i] >>= shift;
            if (i + 1 < rem.size())
                rem[i] |= static_cast<uint32_t>(static_cast<uint64_t>(rem[i + 1]) << (32 - shift));
        }
    }
    while (!rem.empty() && rem.back() == 0) rem.pop_back();
}

BigInt BigInt::operator+(const BigInt& other) const {
    BigInt out;
    if (sign_ == 0) return other;
    if (other.sign_ == 0) return *this;
    if (sign_ == other.sign_) {
        out.sign_ = sign_;
        out.mag_ = add_mag(mag_, other.mag_);
    } else {
        int c = cmp_mag(mag_, other.mag_);
        if (c == 0) return out;
        if (c > 0) {
            out.sign_ = sign_;
            out.mag_ = sub_mag(mag_, other.mag_);
        } else {
            out.sign_ = other.sign_;
            out.mag_ = sub_mag(other.mag_, mag_);
        }
    }
    out.normalize();
    return out;
}

BigInt BigInt::operator-(const BigInt& other) const { return *this + other.negate(); }

BigInt BigInt::operator*(const BigInt& other) const {
    BigInt out;
    if (sign_ == 0 || other.sign_ == 0) return out;
    out.sign_ = sign_ * other.sign_;
    out.mag_ = mul_mag(mag_, other.mag_);
    out.normalize();
    return out;
}

BigInt BigInt::operator/(const BigInt& other) const {
    std::vector<uint32_t> qm, rm;
    divmod_mag(mag_, other.mag_, qm, rm);
    BigInt q;
    q.mag_ = std::move(qm);
    q.sign_ = q.mag_.empty() ? 0 : sign_ * other.sign_;
    return q;
}

BigInt BigInt::operator%(const BigInt& other) const {
    std::vector<uint32_t> qm, rm;
    divmod_mag(mag_, other.mag_, qm, rm);
    BigInt r;
    r.mag_ = std::move(rm);
    r.sign_ = r.mag_.empty() ? 0 : sign_;
    return r;
}

BigInt BigInt::operator<<(uint64_t bits) const {
    if (sign_ == 0 || bits == 0) return *this;
    BigInt out;
    out.sign_ = sign_;
    size_t limb_shift = bits / 32;
    int bit_shift = static_cast<int>(bits % 32);
    out.mag_.assign(mag_.size() + limb_shift + 1, 0);
    for (size_t i = 0; i < mag_.size(); ++i) {
        out.mag_[i + limb_shift] |= bit_shift == 0 ? mag_[i] : (mag_[i] << bit_shift);
        if (bit_shift != 0)
            out.mag_[i + limb_shift + 1] |=
                static_cast<uint32_t>(static_cast<uint64_t>(mag_[i]) >> (32 - bit_shift));
    }
    out.normalize();
    return out;
}

BigInt BigInt::operator>>(uint64_t bits) const {
    if (sign_ == 0 || bits == 0) return *this;
    size_t limb_shift = bits / 32;
    int bit_shift = static_cast<int>(bits % 32);
    if (limb_shift >= mag_.size()) return BigInt();
    BigInt out;
    out.sign_ = sign_;
    out.mag_.assign(mag_.begin() + static_cast<long>(limb_shift), mag_.end());
    if (bit_shift != 0) {
        for (size_t i = 0; i < out.mag_.size(); ++i) {
            out.mag_[i] >>= bit_shift;
            if (i + 1 < out.mag_.size())
                out.mag_[i] |=
                    static_cast<uint32_t>(static_cast<uint64_t>(out.mag_[i + 1]) << (32 - bit_shift));
        }
    }
    out.normalize();
    return out;
}

std::strong_ordering BigInt::operator<=>(const BigInt& other) const {
    if (sign_ != other.sign_)
        return sign_ < other.sign_ ? std::strong_ordering::less : std::strong_ordering::greater;
    int c = cmp_mag(mag_, other.mag_) * sign_;
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

bool BigInt::operator==(const BigInt& other) const {
    return sign_ == other.sign_ && mag_ == other.mag_;
}

uint64_t BigInt::bit_length() const {
    if (mag_.empty()) return 0;
    uint64_t bits = (mag_.size() - 1) * 32ull;
    uint32_t top = mag_.back();
    while (top != 0) {
        top >>= 1;
        ++bits;
    }
    return bits;
}

uint64_t BigInt::trailing_zero_bits() const {
    if (mag_.empty()) return 0;
    uint64_t count = 0;
    for (size_t i = 0; i < mag_.size(); ++i) {
        if (mag_[i] == 0) {
            count += 32;
            continue;
        }
        count += static_cast<uint64_t>(__builtin_ctz(mag_[i]));
        break;
    }
    return count;
}

BigInt BigInt::gcd(BigInt a, BigInt b) {
    a = a.abs();
    b = b.abs();
    while (!b.is_zero()) {
        BigInt r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

double BigInt::log2_abs() const {
    if (mag_.empty()) throw std::domain_error("log2 of zero");
    uint64_t bits = bit_length();
    if (bits <= 62) {
        uint64_t v = mag_[0];
        if (mag_.size() > 1) v |= static_cast<uint64_t>(mag_[1]) << 32;
        return std::log2(static_cast<double>(v));
    }
    BigInt top = *this >> (bits - 62);
    uint64_t v = top.mag_[0];
    if (top.mag_.size() > 1) v |= static_cast<uint64_t>(top.mag_[1]) << 32;
    return std::log2(static_cast<double>(v)) + static_cast<double>(bits - 62);
}

double BigInt::to_double() const {
    if (mag_.empty()) return 0.0;
    double out = 0.0;
    for (size_t i = mag_.size(); i-- > 0;) out = out * 4294967296.0 + mag_[i];
    return sign_ < 0 ? -out : out;
}

std::string BigInt::to_string() const {
    if (mag_.empty()) return "0";
    std::vector<uint32_t> cur = mag_;
    std::string digits;
    const std::vector<uint32_t> ten9 = {1000000000u};
    while (!cur.empty()) {
        std::vector<uint32_t> q, r;
        divmod_mag(cur, ten9, q, r);
        uint32_t chunk = r.empty() ? 0 : r[0];
        std::string part = std::to_string(chunk);
        if (!q.empty()) part.insert(0, 9 - part.size(), '0');
        digits.insert(0, part);
        cur = std::move(q);
    }
    return (sign_ < 0 ? "-" : "") + digits;
}

BigRational::BigRational(BigInt numerator, BigInt denominator)
    : num_(std::move(numerator)), den_(std::move(denominator)) {
    if (den_.is_zero()) throw DivisionByZero();
    reduce();
}

BigRational::BigRational(int64_t numerator, int64_t denominator)
    : BigRational(BigInt(numerator), BigInt(denominator)) {}

void BigRational::reduce() {
    if (den_.is_negative()) {
        num_ = num_.negate();
        den_ = den_.negate();
    }
    if (num_.is_zero()) {
        den_ = BigInt(1);
        return;
    }
    // power-of-two denominators are the common case in the probability
    // products; reduce them with shifts and skip the general gcd
    if (den_.bit_length() == den_.trailing_zero_bits() + 1) {
        uint64_t twos = std::min(num_.trailing_zero_bits(), den_.trailing_zero_bits());
        if (twos != 0) {
            num_ = num_ >> twos;
            den_ = den_ >> twos;
        }
        return;
    }
    BigInt g = BigInt::gcd(num_, den_);
    if (g > BigInt(1)) {
        num_ = num_ / g;
        den_ = den_ / g;
    }
}

BigRational BigRational::operator+(const BigRational& other) const {
    return BigRational(num_ * other.den_ + other.num_ * den_, den_ * other.den_);
}

BigRational BigRational::operator-(const BigRational& other) const {
    return BigRational(num_ * other.den_ - other.num_ * den_, den_ * other.den_);
}

BigRational BigRational::operator*(const BigRational& other) const {
    return BigRational(num_ * other.num_, den_ * other.den_);
}

BigRational BigRational::operator/(const BigRational& other) const {
    if (other.num_.is_zero()) throw DivisionByZero();
    return BigRational(num_ * other.den_, den_ * other.num_);
}

std::strong_ordering BigRational::operator<=>(const BigRational& other) const {
    return (num_ * other.den_) <=> (other.num_ * den_);
}

bool BigRational::operator==(const BigRational& other) const {
    return num_ == other.num_ && den_ == other.den_;
}

double BigRational::to_double() const {
    if (num_.is_zero()) return 0.0;
    double l2 = num_.log2_abs() - den_.log2_abs();
    if (l2 < -1074.0) return num_.is_negative() ? -0.0 : 0.0;
    if (l2 > 1023.0) return num_.is_negative() ? -HUGE_VAL : HUGE_VAL;
    // scale the numerator so the integer quotient keeps ~63 significant
    // bits, then undo the scaling in floating point
    int64_t nb = static_cast<int64_t>(num_.bit_length());
    int64_t db = static_cast<int64_t>(den_.bit_length());
    int64_t shift = db + 63 - nb;
    BigInt scaled = shift >= 0 ? (num_.abs() << static_cast<uint64_t>(shift))
                               : (num_.abs() >> static_cast<uint64_t>(-shift));
    BigInt q = scaled / den_;
    double out = q.to_double() * std::exp2(-static_cast<double>(shift));
    return num_.is_negative() ? -out : out;
}

double BigRational::log2() const {
    if (num_.is_zero() || num_.is_negative())
        throw std::domain_error("log2 requires a positive rational");
    return num_.log2_abs() - den_.log2_abs();
}

std::string BigRational::to_string() const {
    if (den_ == BigInt(1)) return num_.to_string();
    return num_.to_string() + "/" + den_.to_string();
}

} // namespace cpir
