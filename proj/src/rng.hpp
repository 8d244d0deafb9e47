#pragma once

#include <cstdint>
#include <random>

namespace wormlab {

// Seeded PRNG with hand-rolled draws. std::uniform_real_distribution and
// friends differ across standard libraries; these do not, so equal seeds give
// equal runs on any platform.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    // Uniform in [0, 1) with 53 bits of precision.
    double canonical() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return canonical() < p; }

    // Uniform in [0, n). Rejection-sampled, bias-free.
    uint64_t uniform_index(uint64_t n) {
        if (n <= 1) return 0;
        const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % n;
    }

    uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace wormlab
