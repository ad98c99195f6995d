#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace sparsespec {

// The single random generator used everywhere. std::mt19937_64 is fully
// specified by the standard, and all value transforms below are written
// out explicitly instead of using std::*_distribution (whose output is
// implementation-defined), so a seed reproduces the same stream on any
// platform.
//
// Stream layout:
//   uniform()          one engine draw, top 53 bits -> [0, 1)
//   uniform(lo, hi)    one engine draw
//   uniform_index(n)   one engine draw (Lemire multiply-shift)
//   gaussian()         two engine draws (Box-Muller, cosine branch)
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    /// Uniform integer in [0, n). n must be >= 1.
    std::uint64_t uniform_index(std::uint64_t n) {
        const auto wide = static_cast<unsigned __int128>(engine_()) * n;
        return static_cast<std::uint64_t>(wide >> 64);
    }

    /// Standard normal deviate.
    double gaussian() {
        const double u1 = 1.0 - uniform(); // (0, 1], keeps log finite
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

private:
    std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; used to derive independent sub-streams
/// (noise, subsampling) from a base seed without correlating them.
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Stream tags XORed into a base seed before mix_seed(): noise injection
/// and sample selection never share a stream with the scene draw.
inline constexpr std::uint64_t kNoiseStreamTag = 0x6e6f697365ULL;  // "noise"
inline constexpr std::uint64_t kSampleStreamTag = 0x73616d706cULL; // "sampl"

} // namespace sparsespec
