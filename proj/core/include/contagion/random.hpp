#pragma once

#include <cstdint>
#include <limits>

namespace contagion {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

/// Counter-based random stream.
///
/// Draw i of a stream with key k is mix64(k + (i + 1) * golden), so a stream
/// is fully determined by its key and position. Child streams are derived by
/// hashing the parent key with a stream index (see split()), which makes
/// replica streams independent of scheduling and thread count.
///
/// Satisfies UniformRandomBitGenerator, so it plugs into <random> distributions.
class RandomStream {
public:
    using result_type = std::uint64_t;

    static constexpr std::uint64_t golden = 0x9e3779b97f4a7c15ULL;

    constexpr explicit RandomStream(std::uint64_t seed = 0) noexcept : key_(mix64(seed ^ 0x6a09e667f3bcc909ULL)) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept {
        ++counter_;
        return mix64(key_ + counter_ * golden);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound). Lemire's multiply-shift with rejection.
    std::uint64_t below(std::uint64_t bound) noexcept {
        if (bound <= 1) {
            return 0;
        }
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t x = (*this)();
            __extension__ using u128 = unsigned __int128;
            const u128 m = static_cast<u128>(x) * bound;
            if (static_cast<std::uint64_t>(m) >= threshold) {
                return static_cast<std::uint64_t>(m >> 64);
            }
        }
    }

    bool bernoulli(double p) noexcept { return uniform() < p; }

    /// Independent child stream number `index`. Does not advance this stream.
    [[nodiscard]] constexpr RandomStream split(std::uint64_t index) const noexcept {
        RandomStream child;
        child.key_ = mix64(key_ ^ mix64(index + 0x3c6ef372fe94f82bULL));
        return child;
    }

    constexpr std::uint64_t key() const noexcept { return key_; }
    constexpr std::uint64_t position() const noexcept { return counter_; }

private:
    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

}  // namespace contagion
