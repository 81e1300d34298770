#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace notecrack {

/// SplitMix64 finalizer. Used to derive independent sub-seeds from a user
/// seed plus a stream tag, so that e.g. per-restart or per-cipher streams
/// never overlap regardless of how many values each one consumes.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t index = 0) {
    return splitmix64(splitmix64(seed ^ splitmix64(tag)) ^ splitmix64(index ^ 0x5851f42d4c957f2dULL));
}

/// Deterministic RNG. mt19937_64 is fully specified by the standard; the
/// bounded draw and the shuffle are implemented here rather than with
/// std::uniform_int_distribution / std::shuffle, whose output is
/// implementation-defined. Same seed, same results, on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, n). Rejection sampling, exactly uniform.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t rem = (UINT64_MAX % n + 1) % n;  // 2^64 mod n
        const std::uint64_t bound = 0ULL - rem;              // 2^64 - rem
        for (;;) {
            const std::uint64_t r = engine_();
            if (rem == 0 || r < bound) return r % n;
        }
    }

    /// Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace notecrack
