#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace phqs {

// Counter-based random stream built on the SplitMix64 sequence.
//
// Every sample index owns a private window of 2^16 consecutive positions in
// one global SplitMix64 sequence keyed by the seed, so the value of sample i
// depends only on (seed, i). Streams generated serially, in parallel, or by
// disjoint index ranges are therefore bit-identical, and substreams never
// overlap as long as a sample draws fewer than 2^16 variates.
class SampleRng {
public:
    static constexpr int kDrawBits = 16;
    static constexpr std::uint64_t kMaxDraws = std::uint64_t{1} << kDrawBits;
    static constexpr std::uint64_t kMaxSamples = std::uint64_t{1} << (64 - kDrawBits);

    SampleRng(std::uint64_t seed, std::uint64_t sample_index)
        : base_(window_base(seed, sample_index)), draws_(0) {}

    std::uint64_t next_u64() {
        if (draws_ >= kMaxDraws)
            throw std::runtime_error("SampleRng: per-sample draw budget exhausted");
        return mix(base_ + draws_++ * kGamma);
    }

    // uniform in [0, 1), 53-bit resolution
    double next_unit() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // standard normal via Box-Muller (two uniforms, second draw discarded)
    double next_gaussian() {
        double u1 = next_unit();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        double u2 = next_unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    std::uint64_t draws() const { return draws_; }

    // Stateless keyed hash; used for sub-seed derivation (sweep points etc.).
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

    static std::uint64_t window_base(std::uint64_t seed, std::uint64_t sample_index) {
        if (sample_index >= kMaxSamples)
            throw std::invalid_argument("SampleRng: sample index exceeds 2^48");
        return mix(seed) + (sample_index << kDrawBits) * kGamma;
    }

    std::uint64_t base_;
    std::uint64_t draws_;
};

} // namespace phqs
