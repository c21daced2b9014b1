#pragma once

#include <cstdint>
#include <random>

namespace hdi::rng {

// splitmix64; used only to derive well-separated seeds for substreams.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t s = mix64(seed ^ 0x243f6a8885a308d3ULL);
    s = mix64(s ^ a);
    s = mix64(s ^ b);
    return mix64(s ^ c);
}

// Deterministic stream on top of std::mt19937_64. The engine's output
// sequence is fully specified by the standard; the distribution helpers
// below avoid std::uniform_*_distribution, whose output is
// implementation-defined, so streams are reproducible across platforms.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, n) via rejection sampling.
    std::uint64_t next_below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    bool next_bernoulli(double p) { return next_double() < p; }

private:
    std::mt19937_64 engine_;
};

// Purpose tags keep substreams of one run from colliding.
enum class Purpose : std::uint64_t {
    Bootstrap = 1,
    NullOutcomes = 2,
};

inline Stream substream(std::uint64_t seed, Purpose purpose,
                        std::uint64_t a = 0, std::uint64_t b = 0) {
    return Stream(derive_seed(seed, static_cast<std::uint64_t>(purpose), a, b));
}

}  // namespace hdi::rng
