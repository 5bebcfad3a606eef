#ifndef NETDIFF_RNG_HPP
#define NETDIFF_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace netdiff {

// Stateless splitmix64 step, used only to derive sub-stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a) {
    return splitmix64(base ^ splitmix64(a));
}
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
    return derive_seed(derive_seed(base, a), b);
}
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b,
                                 std::uint64_t c) {
    return derive_seed(derive_seed(base, a, b), c);
}

/// Deterministic random stream. The engine (mt19937_64) is fully specified
/// by the C++ standard and all variate transforms below are hand-rolled, so
/// a given seed yields the same draws on every platform and compiler. The
/// std::<distribution> adaptors are deliberately not used: their algorithms
/// are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t bits() { return eng_(); }

    /// Uniform on [0,1) with 53-bit resolution.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    /// Unbiased uniform integer in [0, n), n >= 1.
    std::uint64_t uniform_below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = eng_();
        } while (x >= limit);
        return x % n;
    }

    /// Poisson variate. Knuth's product method on chunks of rate <= 30;
    /// the chunk sum is exactly Poisson(lambda) and stays clear of
    /// exp() underflow.
    long poisson(double lambda) {
        long total = 0;
        while (lambda > 30.0) {
            total += poisson_knuth(30.0);
            lambda -= 30.0;
        }
        if (lambda > 0.0) total += poisson_knuth(lambda);
        return total;
    }

private:
    long poisson_knuth(double lambda) {
        const double floor_p = std::exp(-lambda);
        long k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform();
        } while (p > floor_p);
        return k - 1;
    }

    std::mt19937_64 eng_;
};

} // namespace netdiff

#endif
