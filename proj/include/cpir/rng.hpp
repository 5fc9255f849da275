#pragma once

#include <cstdint>
#include <random>

namespace cpir {

/// Deterministic seeded generator. All randomized operations take one of
/// these explicitly so that a fixed seed reproduces identical results on
/// any platform. Uniform sampling below a bound uses masked rejection on
/// the raw 64-bit stream instead of std distributions, which are not
/// portable across standard libraries.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed), seed_(seed) {}

    uint64_t seed() const { return seed_; }

    uint64_t next() { return engine_(); }

    /// Uniform value in [0, bound). bound must be nonzero.
    uint32_t below(uint32_t bound) {
        uint32_t mask = bound - 1;
        mask |= mask >> 1;
        mask |= mask >> 2;
        mask |= mask >> 4;
        mask |= mask >> 8;
        mask |= mask >> 16;
        for (;;) {
            uint32_t r = static_cast<uint32_t>(next()) & mask;
            if (r < bound) return r;
        }
    }

    bool coin() { return (next() >> 63) != 0; }

    /// Independent generator for trial `stream`, derived from the original
    /// seed. Trials seeded this way are reproducible regardless of
    /// execution order.
    Rng fork(uint64_t stream) const {
        uint64_t z = seed_ + 0x9e3779b97f4a7c15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return Rng(z ^ (z >> 31));
    }

private:
    std::mt19937_64 engine_;
    uint64_t seed_;
};

} // namespace cpir
