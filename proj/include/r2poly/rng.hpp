#ifndef R2POLY_RNG_HPP
#define R2POLY_RNG_HPP

#include <cstdint>
#include <limits>
#include <random>

namespace r2poly {

/// Seeded 64-bit generator built on std::mt19937_64.
///
/// Stream semantics: Rng(seed, stream) seeds the engine from the seed
/// sequence {seed lo, seed hi, stream lo, stream hi}, so every (seed, stream)
/// pair is an independent, reproducible stream. split(i) returns stream i of
/// the same seed; it does not advance the parent.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0, std::uint64_t stream = 0) : seed_(seed), stream_(stream)
    {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
        engine_.seed(seq);
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()() { return engine_(); }

    /// Uniform integer in [0, bound) by multiply-and-reject; no modulo bias.
    std::uint64_t below(std::uint64_t bound)
    {
        if (bound == 0)
            return 0;
        unsigned __int128 prod = static_cast<unsigned __int128>(engine_()) * bound;
        auto low = static_cast<std::uint64_t>(prod);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                prod = static_cast<unsigned __int128>(engine_()) * bound;
                low = static_cast<std::uint64_t>(prod);
            }
        }
        return static_cast<std::uint64_t>(prod >> 64);
    }

    bool coin() { return (engine_() >> 63) != 0; }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    Rng split(std::uint64_t stream) const { return Rng(seed_, stream); }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
};

} // namespace r2poly

#endif // R2POLY_RNG_HPP
