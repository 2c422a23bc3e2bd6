#pragma once

#include <cstdint>

namespace dfastat {

/// Master seed for a Monte Carlo run.
struct Seed {
    std::uint64_t value = 0;
    friend bool operator==(Seed, Seed) = default;
};

/// SplitMix64 output function (Steele, Lea & Flood 2014).
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// SplitMix64: a Weyl-sequence counter passed through mix64. Per-trial
/// streams are keyed from (master seed, trial index) so every trial's
/// sample path is fixed regardless of which thread runs it or when.
class SplitMix64 {
public:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

    constexpr explicit SplitMix64(std::uint64_t state) : state_(state) {}

    /// Stream for one trial. Mixing both halves keeps neighbouring
    /// (seed, trial) pairs from producing shifted copies of one stream.
    static constexpr SplitMix64 for_trial(Seed seed, std::uint64_t trial) {
        return SplitMix64(mix64(mix64(seed.value) ^ (trial * kGamma + 0xD1B54A32D192ED03ULL)));
    }

    constexpr std::uint64_t next() {
        state_ += kGamma;
        return mix64(state_);
    }

    /// Uniform on [0,1) with 53 random bits.
    constexpr double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

}  // namespace dfastat
