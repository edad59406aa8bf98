#pragma once

#include <cmath>
#include <cstdint>

namespace coldopt {

// SplitMix64 finalizer. Stable across platforms and the basis of every
// random draw in the project.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

/// Counter-based random stream. Draw i depends only on (master_seed, tag, i),
/// so streams never perturb each other, rows can be generated in any order or
/// in parallel, and output is identical across runs and thread schedules.
class RandomStream {
public:
    RandomStream(std::uint64_t master_seed, std::uint64_t tag)
        : seed_(mix64(master_seed + tag * kGoldenGamma) ^ tag) {}

    std::uint64_t bits(std::uint64_t i) const { return mix64(seed_ + (i + 1) * kGoldenGamma); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01(std::uint64_t i) const { return double(bits(i) >> 11) * 0x1.0p-53; }

    double uniform(std::uint64_t i, double lo, double hi) const {
        return lo + (hi - lo) * uniform01(i);
    }

    /// Uniform level in {1, 2, 3}. The 2^64 mod 3 bias is ~2^-63.
    int level3(std::uint64_t i) const { return 1 + int(bits(i) % 3); }

    /// Standard normal via Box-Muller; consumes draws 2i and 2i+1.
    double normal(std::uint64_t i) const {
        const double u1 = double((bits(2 * i) >> 11) + 1) * 0x1.0p-53; // (0, 1]
        const double u2 = double(bits(2 * i + 1) >> 11) * 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.28318530717958647692 * u2);
    }

private:
    std::uint64_t seed_;
};

// Stream tags. New consumers append; existing tags never change so seeded
// outputs stay reproducible.
namespace stream_tag {
inline constexpr std::uint64_t kTemperature = 1;
inline constexpr std::uint64_t kHumidity = 2;
inline constexpr std::uint64_t kPackaging = 3;
inline constexpr std::uint64_t kEnvironment = 4;
inline constexpr std::uint64_t kNoise = 5;
inline constexpr std::uint64_t kMcShortage = 6;
} // namespace stream_tag

} // namespace coldopt
