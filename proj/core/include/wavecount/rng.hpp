#pragma once

#include <array>
#include <cstdint>

namespace wavecount {

/// Philox 4x32-10 counter-based generator block function.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Deterministic random stream addressed by (seed, stream, sample). Distinct
/// addresses yield statistically independent streams, so sampling can be
/// parallelized over sample indices with schedule-independent results.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint32_t stream, std::uint64_t sample);

    std::uint32_t next_u32();
    std::uint64_t next_u64();

    double uniform();      // [0, 1)
    double uniform_pos();  // (0, 1]
    double normal();       // standard normal, Box-Muller
    double chi3();         // length of a 3-vector of standard normals
    double maxwell_signed();  // chi3 magnitude with a random sign

private:
    std::array<std::uint32_t, 4> counter_;
    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> block_{};
    int pos_ = 4;
    bool has_cached_normal_ = false;
    double cached_normal_ = 0.0;
};

}  // namespace wavecount
