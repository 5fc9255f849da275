#include "cpir/analysis.hpp"

#include <array>
#include <cmath>
#include <ostream>
#include <sstream>

namespace cpir {

namespace {

// 1 - q^{-e} as an exact rational
BigRational one_minus_q_pow(uint32_t q, uint64_t e) {
    BigInt qe = BigInt::pow(BigInt(static_cast<int64_t>(q)), e);
    return BigRational(qe - BigInt(1), qe);
}

// prod_{j=lo}^{hi} (1 - q^{-s*j})
BigRational full_rank_product(uint32_t q, uint32_t s, uint64_t lo, uint64_t hi) {
    BigRational out(1, 1);
    for (uint64_t j = lo; j <= hi; ++j) out = out * one_minus_q_pow(q, s * j);
    return out;
}

uint64_t checked_bits(const SchemeParams& p, uint64_t row_count) {
    p.validate();
    unsigned __int128 bits = static_cast<unsigned __int128>(row_count) * p.n * p.s * p.w();
    if (bits > UINT64_MAX) throw InvalidParams("bit count overflows 64 bits");
    return static_cast<uint64_t>(bits);
}

} // namespace

uint64_t upload_bits(const SchemeParams& p) { return checked_bits(p, p.db_cols()); }

uint64_t download_bits(const SchemeParams& p) { return checked_bits(p, p.big_l); }

BigRational rate_exact(const SchemeParams& p) {
    p.validate();
    BigRational prefactor(BigInt::from_u64(p.big_l),
                          BigInt::from_u64(p.db_cols()) + BigInt::from_u64(p.big_l));
    return prefactor * rate_asymptotic(p);
}

BigRational rate_asymptotic(const SchemeParams& p) {
    p.validate();
    // 1 - (k + (v/s)(n-k))/n simplifies to delta / (n*s)
    return BigRational(BigInt::from_u64(p.delta()),
                       BigInt::from_u64(static_cast<uint64_t>(p.n) * p.s));
}

BigInt gaussian_binomial(uint32_t s, uint32_t v, uint32_t q) {
    if (v > s) return BigInt(0);
    if (v == 0 || v == s) return BigInt(1);
    BigInt qq(static_cast<int64_t>(q));
    BigInt num(1), den(1);
    for (uint32_t i = 0; i < v; ++i) {
        num = num * (BigInt::pow(qq, s - i) - BigInt(1));
        den = den * (BigInt::pow(qq, i + 1) - BigInt(1));
    }
    BigInt quotient = num / den;
    // the quotient is exact; guard against arithmetic slips
    if (!(quotient * den == num)) throw Error("gaussian binomial division not exact");
    return quotient;
}

BigInt superspace_count(uint32_t s, uint32_t v, uint32_t z, uint32_t q) {
    if (v > z || z > s) throw InvalidParams("superspace count needs v <= z <= s");
    return gaussian_binomial(s - v, z - v, q);
}

BigRational superspace_hit_prob(uint32_t s, uint32_t v, uint32_t q) {
    if (v == 0 || v >= s) throw InvalidParams("superspace hit probability needs 0 < v < s");
    return BigRational(superspace_count(s, v, s - 1, q), gaussian_binomial(s, s - 1, q));
}

double ss_workfactor_log2(uint32_t s, uint32_t v, uint32_t q) {
    BigRational p = superspace_hit_prob(s, v, q);
    return p.den().log2_abs() - p.num().log2_abs();
}

BigRational ld_rank_bound_exact(uint32_t q, uint32_t s, uint32_t n, uint32_t k) {
    if (k >= n) throw InvalidParams("rank bound needs k < n");
    BigRational codeword_part = full_rank_product(q, s, n - k + 1, n);
    BigRational noise_product = full_rank_product(q, s, 1, n - k);
    BigRational kernel_defect = BigRational(1, 1) - full_rank_product(q, s, k + 1, n);
    return codeword_part * (noise_product - kernel_defect);
}

double ld_rank_bound(uint32_t q, uint32_t s, uint32_t n, uint32_t k) {
    return ld_rank_bound_exact(q, s, n, k).to_double();
}

int64_t expected_subcode_dim(uint64_t m, uint64_t delta, uint64_t n, uint64_t s) {
    if ((m - 1) * delta < n)
        throw InvalidParams("subcode dimension estimate needs (m-1)*delta >= n");
    __int128 len = static_cast<__int128>(m - 1) * delta;
    __int128 dim = len - (len - static_cast<__int128>(n)) * s;
    if (dim < 0) return 0;
    return static_cast<int64_t>(dim);
}

double equiv_field_log2(uint32_t q, uint32_t s) {
    return std::sqrt(static_cast<double>(s)) * std::log2(static_cast<double>(q));
}

std::vector<TableRow> build_table(const std::vector<std::array<uint32_t, 5>>& rows) {
    std::vector<TableRow> out;
    out.reserve(rows.size());
    for (const auto& t : rows) {
        SchemeParams p{t[0], t[1], t[2], t[3], t[4], 1, 1};
        p.validate();
        TableRow row;
        row.q = t[0];
        row.s = t[1];
        row.v = t[2];
        row.n = t[3];
        row.k = t[4];
        row.delta = p.delta();
        row.rate = rate_asymptotic(p);
        row.ss_log2 = ss_workfactor_log2(row.s, row.v, row.q);
        out.push_back(std::move(row));
    }
    return out;
}

const std::vector<std::array<uint32_t, 5>>& reference_param_sets() {
    static const std::vector<std::array<uint32_t, 5>> rows = {
        {16, 32, 31, 100, 50}, {16, 32, 16, 100, 50}, {32, 32, 31, 100, 50},
        {32, 32, 26, 100, 50}, {32, 32, 24, 100, 50}, {64, 32, 21, 100, 50},
    };
    return rows;
}

const std::vector<std::string>& reference_ld_workfactors() {
    static const std::vector<std::string> values = {"2^128", "2^128", "2^160",
                                                    "2^160", "2^120", "2^126"};
    return values;
}

std::vector<SweepPoint> attack_sweep(uint32_t q, uint32_t s, uint32_t n, uint32_t k,
                                     uint32_t v_lo, uint32_t v_hi) {
    if (v_lo == 0 || v_hi >= s || v_lo > v_hi)
        throw InvalidParams("sweep range must satisfy 0 < v_lo <= v_hi < s");
    double ld = ld_rank_bound(q, s, n, k); // independent of v
    std::vector<SweepPoint> out;
    for (uint32_t v = v_lo; v <= v_hi; ++v)
        out.push_back(SweepPoint{v, ss_workfactor_log2(s, v, q), ld});
    return out;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points) {
    out << "v,ss_log2,ld_bound\n";
    for (const auto& p : points) {
        std::ostringstream line;
        line.precision(12);
        line << p.v << "," << p.ss_log2 << "," << p.ld_bound;
        out << line.str() << "\n";
    }
}

} // namespace cpir
