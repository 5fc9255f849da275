#include "cpir/code.hpp"

#include <algorithm>

namespace cpir {

namespace {

MatExt restrict_columns(const ExtField& f, const MatExt& m, std::span<const uint32_t> cols) {
    MatExt out(m.rows, static_cast<uint32_t>(cols.size()), f);
    for (uint32_t r = 0; r < m.rows; ++r)
        for (uint32_t c = 0; c < cols.size(); ++c) out.at(r, c) = m.at(r, cols[c]);
    return out;
}

} // namespace

LinearCode sample_code(const ExtField& f, uint32_t n, uint32_t k, Rng& rng) {
    if (k == 0 || k >= n) throw InvalidParams("code dimension must satisfy 0 < k < n");
    for (;;) {
        MatExt g(k, n, f);
        for (auto& e : g.a) e = f.random_elem(rng);
        if (rank(f, g) == k) return LinearCode{n, k, std::move(g)};
    }
}

InfoSet pick_information_set(const ExtField& f, const LinearCode& code, Rng& rng) {
    std::vector<uint32_t> all(code.n);
    for (uint32_t i = 0; i < code.n; ++i) all[i] = i;
    for (uint32_t attempt = 0; attempt < kInfoSetRetryLimit; ++attempt) {
        // partial Fisher-Yates: first k entries become the candidate subset
        for (uint32_t i = 0; i < code.k; ++i) {
            uint32_t j = i + rng.below(code.n - i);
            std::swap(all[i], all[j]);
        }
        std::vector<uint32_t> info(all.begin(), all.begin() + code.k);
        std::sort(info.begin(), info.end());
        MatExt sub = restrict_columns(f, code.gen, info);
        try {
            MatExt inv = inverse(f, sub);
            InfoSet out;
            out.info = std::move(info);
            out.erasure.reserve(code.n - code.k);
            for (uint32_t i = 0; i < code.n; ++i)
                if (!std::binary_search(out.info.begin(), out.info.end(), i))
                    out.erasure.push_back(i);
            out.gen_info_inv = std::move(inv);
            return out;
        } catch (const Singular&) {
            continue;
        }
    }
    throw RetryLimitExceeded("no information set found; generator matrix looks degenerate");
}

InfoSet info_set_from_indices(const ExtField& f, const LinearCode& code,
                              std::vector<uint32_t> info) {
    if (info.size() != code.k) throw DimensionMismatch("information set must have k indices");
    std::sort(info.begin(), info.end());
    for (uint32_t idx : info)
        if (idx >= code.n) throw IndexOutOfRange("information set index out of range");
    if (std::adjacent_find(info.begin(), info.end()) != info.end())
        throw DimensionMismatch("information set indices must be distinct");
    MatExt sub = restrict_columns(f, code.gen, info);
    MatExt inv = inverse(f, sub); // throws Singular when not an information set
    InfoSet out;
    out.info = std::move(info);
    for (uint32_t i = 0; i < code.n; ++i)
        if (!std::binary_search(out.info.begin(), out.info.end(), i))
            out.erasure.push_back(i);
    out.gen_info_inv = std::move(inv);
    return out;
}

std::vector<ExtElem> sample_codeword(const ExtField& f, const LinearCode& code, Rng& rng) {
    std::vector<ExtElem> word(code.n, f.zero());
    for (uint32_t r = 0; r < code.k; ++r) {
        ExtElem u = f.random_elem(rng);
        if (f.is_zero(u)) continue;
        for (uint32_t c = 0; c < code.n; ++c)
            word[c] = f.add(word[c], f.mul(u, code.gen.at(r, c)));
    }
    return word;
}

std::vector<ExtElem> erasure_decode(const ExtField& f, const LinearCode& code,
                                    const InfoSet& iset,
                                    std::span<const ExtElem> values_on_info) {
    if (values_on_info.size() != code.k)
        throw DimensionMismatch("erasure decoding needs exactly k known values");
    // message = values * gen_info_inv, then re-encode
    std::vector<ExtElem> msg(code.k, f.zero());
    for (uint32_t c = 0; c < code.k; ++c)
        for (uint32_t t = 0; t < code.k; ++t)
            msg[c] = f.add(msg[c], f.mul(values_on_info[t], iset.gen_info_inv.at(t, c)));
    std::vector<ExtElem> word(code.n, f.zero());
    for (uint32_t r = 0; r < code.k; ++r) {
        if (f.is_zero(msg[r])) continue;
        for (uint32_t c = 0; c < code.n; ++c)
            word[c] = f.add(word[c], f.mul(msg[r], code.gen.at(r, c)));
    }
    return word;
}

} // namespace cpir
