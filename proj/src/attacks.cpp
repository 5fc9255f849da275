#include "cpir/attacks.hpp"

#include <algorithm>

#include "cpir/subspace.hpp"

namespace cpir {

SubspaceGuess true_noise_guess(const QuerySecret& secret) {
    return SubspaceGuess{part_rows(secret.basis, Part::noise)};
}

SubspaceGuess random_guess(const BaseField& f, uint32_t dim, uint32_t ambient, Rng& rng) {
    return SubspaceGuess{sample_subspace(f, dim, ambient, rng)};
}

MatExt puncture_file(const ExtField& f, const Query& query, uint32_t index) {
    const SchemeParams& p = query.params;
    if (index >= p.m) throw IndexOutOfRange("file index out of range");
    if (p.m == 1) throw DimensionMismatch("puncturing the only file leaves nothing");
    auto delta = static_cast<uint32_t>(p.delta());
    uint32_t kept = delta * (p.m - 1);
    uint32_t block_start = index * delta;
    MatExt out(p.n, kept, f);
    uint32_t col = 0;
    for (uint32_t r = 0; r < query.mat.rows; ++r) {
        if (r >= block_start && r < block_start + delta) continue;
        for (uint32_t c = 0; c < p.n; ++c) out.at(c, col) = query.mat.at(r, c);
        ++col;
    }
    return out;
}

MatExt dual_basis(const ExtField& f, const MatExt& punctured_gen) {
    return right_kernel(f, punctured_gen);
}

int64_t subspace_subcode_dim(const ExtField& f, const MatExt& punctured_gen,
                             const SubspaceGuess& guess) {
    uint32_t s = f.extension_degree();
    if (guess.basis_rows.cols != s)
        throw DimensionMismatch("guess ambient dimension must equal the extension degree");
    const BaseField& base = f.base();
    uint32_t n_rows = punctured_gen.rows;
    uint32_t length = punctured_gen.cols;

    // Membership in the guessed space is linear over F_q: y lies in Z iff
    // y's coordinate vector annihilates a kernel basis of Z.
    MatBase annihilator = right_kernel(base, guess.basis_rows); // (s - z) x s
    uint32_t checks = annihilator.rows;

    // A codeword is x * G with x in F_{q^s}^{n_rows}; over F_q that is
    // n_rows * s unknowns. Each coordinate contributes `checks`
    // constraints. Build the constraint matrix and count solutions.
    uint32_t unknowns = n_rows * s;
    MatBase constraints(length * checks, unknowns);
    for (uint32_t col = 0; col < length; ++col) {
        for (uint32_t r = 0; r < n_rows; ++r) {
            const ExtElem& g = punctured_gen.at(r, col);
            for (uint32_t t = 0; t < s; ++t) {
                // contribution of unknown (r, t): coordinates of x^t * g
                ExtElem contrib = f.mul(f.monomial(t), g);
                for (uint32_t chk = 0; chk < checks; ++chk) {
                    uint8_t acc = 0;
                    for (uint32_t j = 0; j < s; ++j)
                        acc = base.add(acc,
                                       base.mul(contrib.coeffs[j], annihilator.at(chk, j)));
                    constraints.at(col * checks + chk, r * s + t) = acc;
                }
            }
        }
    }
    uint32_t solution_dim =
        checks == 0 ? unknowns : unknowns - rank(base, constraints);
    // coefficient vectors in the kernel of G parameterize the zero
    // codeword; remove them to get the dimension of the subcode itself
    uint32_t gen_rank = rank(f, punctured_gen);
    return static_cast<int64_t>(solution_dim) -
           static_cast<int64_t>(s) * (n_rows - gen_rank);
}

AttackVerdict subspace_attack(const ExtField& f, const Query& query,
                              const SubspaceGuess& guess) {
    AttackVerdict verdict;
    verdict.subcode_dims.reserve(query.params.m);
    for (uint32_t l = 0; l < query.params.m; ++l) {
        MatExt gp = puncture_file(f, query, l);
        verdict.subcode_dims.push_back(subspace_subcode_dim(f, gp, guess));
    }
    uint32_t fired = 0;
    uint32_t last = 0;
    for (uint32_t l = 0; l < verdict.subcode_dims.size(); ++l) {
        if (verdict.subcode_dims[l] > 0) {
            ++fired;
            last = l;
        }
    }
    if (fired == 1) verdict.recovered_index = last;
    return verdict;
}

GuessRateResult estimate_superspace_hit_rate(const SchemeParams& params, uint64_t trials,
                                             Rng& rng) {
    params.validate();
    if (trials == 0) throw InvalidParams("at least one trial required");
    BaseField base = BaseField::with_default_modulus(params.w());
    GuessRateResult out;
    out.trials = trials;
    for (uint64_t t = 0; t < trials; ++t) {
        Rng trial_rng = rng.fork(t);
        MatBase noise_space = sample_subspace(base, params.v, params.s, trial_rng);
        MatBase guess = sample_subspace(base, params.s - 1, params.s, trial_rng);
        if (space_contains(base, guess, noise_space)) ++out.hits;
    }
    out.rate = static_cast<double>(out.hits) / static_cast<double>(out.trials);
    return out;
}

RankExperimentResult ld_rank_experiment(const SchemeParams& params, uint64_t trials,
                                        Rng& rng) {
    params.validate();
    if (trials == 0) throw InvalidParams("at least one trial required");
    auto delta = static_cast<uint32_t>(params.delta());
    uint32_t total_rows = delta * params.m;
    if (total_rows - delta < params.n)
        throw InvalidParams("not enough rows outside the file block to draw n rows");
    if (total_rows < params.n)
        throw InvalidParams("query has fewer than n rows");

    RankExperimentResult out;
    out.trials = trials;
    uint64_t full_excl = 0;
    uint64_t full_incl = 0;
    for (uint64_t t = 0; t < trials; ++t) {
        Rng trial_rng = rng.fork(t);
        uint32_t index = trial_rng.below(params.m);
        auto [query, secret] = build_query(params, index, trial_rng.next());
        const ExtField& field = secret.field;
        uint32_t block_start = index * delta;

        // row pools: outside the queried block, and everything
        std::vector<uint32_t> outside;
        outside.reserve(total_rows - delta);
        for (uint32_t r = 0; r < total_rows; ++r)
            if (r < block_start || r >= block_start + delta) outside.push_back(r);

        auto sample_rows = [&](std::vector<uint32_t> pool, bool force_block) {
            // partial Fisher-Yates for an n-subset; when force_block is
            // set, retry until the subset touches the queried block
            for (;;) {
                std::vector<uint32_t> p = pool;
                for (uint32_t i = 0; i < params.n; ++i) {
                    uint32_t j = i + trial_rng.below(static_cast<uint32_t>(p.size()) - i);
                    std::swap(p[i], p[j]);
                }
                p.resize(params.n);
                if (!force_block) return p;
                for (uint32_t r : p)
                    if (r >= block_start && r < block_start + delta) return p;
            }
        };

        auto full_rank = [&](const std::vector<uint32_t>& row_set) {
            MatExt sub(params.n, params.n, field);
            for (uint32_t i = 0; i < params.n; ++i)
                for (uint32_t c = 0; c < params.n; ++c)
                    sub.at(i, c) = query.mat.at(row_set[i], c);
            return rank(field, sub) == params.n;
        };

        std::vector<uint32_t> everything(total_rows);
        for (uint32_t r = 0; r < total_rows; ++r) everything[r] = r;

        if (full_rank(sample_rows(outside, false))) ++full_excl;
        if (full_rank(sample_rows(everything, true))) ++full_incl;
    }
    out.freq_excluding = static_cast<double>(full_excl) / static_cast<double>(trials);
    out.freq_including = static_cast<double>(full_incl) / static_cast<double>(trials);
    return out;
}

} // namespace cpir
