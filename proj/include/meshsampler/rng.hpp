#pragma once

#include <array>
#include <cstdint>

namespace meshsampler {

// Philox4x32-10 counter-based generator (Salmon et al., "Parallel random
// numbers: as easy as 1, 2, 3", SC 2011). Output is a pure function of
// (key, counter), so parallel callers get scheduling-independent streams.
class Philox4x32 {
public:
    using Block = std::array<std::uint32_t, 4>;

    explicit constexpr Philox4x32(std::uint64_t seed)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

    constexpr Block operator()(Block ctr) const {
        std::array<std::uint32_t, 2> key = key_;
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const auto lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const auto lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

    std::array<std::uint32_t, 2> key_;
};

/// Stream tags keep the per-stage counter spaces disjoint under one seed.
enum class RngStream : std::uint32_t { kAoSamples = 1, kSurfaceSamples = 2 };

/// Counter block for (index, sub-index) in a given stream.
constexpr Philox4x32::Block rng_counter(std::uint64_t index, std::uint32_t sub, RngStream stream) {
    return {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), sub,
            static_cast<std::uint32_t>(stream)};
}

/// Uniform double in [0,1) from 32 random bits.
constexpr double unit_from_u32(std::uint32_t w) { return w * 0x1.0p-32; }

/// Uniform double in [0,1) with 53-bit resolution from two words.
constexpr double unit_from_u64(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32 | lo) >> 11;
    return static_cast<double>(bits) * 0x1.0p-53;
}

}  // namespace meshsampler
