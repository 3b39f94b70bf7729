#pragma once

#include <cstdint>

namespace smale {

// Deterministic splitmix64 stream. Reports must be byte-identical across
// platforms for a fixed seed, so we avoid std:: distributions (their output
// is implementation-defined) and keep the generator self-contained.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, n), n >= 1; rejection keeps it unbiased
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t v = next_u64();
        while (v >= limit) v = next_u64();
        return v % n;
    }

    int range(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    // uniform double in [0,1) with 53 random bits
    double canonical() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool coin() { return (next_u64() & 1) != 0; }

    Rng fork() { return Rng(next_u64()); }

private:
    std::uint64_t state_;
};

}  // namespace smale
