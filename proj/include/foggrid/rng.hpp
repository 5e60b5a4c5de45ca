#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace foggrid {

/// Deterministic random source. All distributions are derived from the raw
/// mt19937_64 output stream (never from std:: distribution objects, whose
/// results are implementation-defined), so a seed fixes the sample sequence.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in {0, ..., n-1}; n must be >= 1.
    int uniform_int(int n) {
        int v = static_cast<int>(uniform01() * static_cast<double>(n));
        return v < n ? v : n - 1;
    }

    /// Poisson sample by Knuth's product method; suitable for small means.
    int poisson(double mean) {
        if (mean <= 0.0) return 0;
        const double limit = std::exp(-mean);
        int k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform01();
        } while (p > limit);
        return k - 1;
    }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

/// Stable seed derivation for independent sub-streams (splitmix64 mix).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace foggrid
