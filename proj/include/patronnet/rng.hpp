#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace patronnet {

// Deterministic RNG facade. std::uniform_*_distribution output is
// implementation-defined, so draws are derived from raw mt19937_64 words
// directly; identical seeds give identical streams on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform integer in [0, bound), bound > 0. Rejection sampling over a
    // power-of-two mask keeps the draw unbiased.
    std::uint64_t below(std::uint64_t bound) {
        if (bound <= 1) return 0;
        std::uint64_t mask = ~std::uint64_t{0} >> __builtin_clzll((bound - 1) | 1);
        for (;;) {
            std::uint64_t x = engine_() & mask;
            if (x < bound) return x;
        }
    }

    // Uniform double in [0, 1), 53 random bits.
    double unit() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace patronnet
