#pragma once

#include <array>
#include <cstdint>

namespace limitlab {

// Philox4x32-10 block function. Exposed for the known-answer tests.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// Counter-based stream: (seed, stream_id) fully determine the output sequence,
// bit-identically across platforms. The 64-bit seed is the Philox key; the
// stream id occupies the high half of the 128-bit counter and a per-stream
// block index the low half, so distinct streams never overlap.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : seed_(seed), stream_(stream_id) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_; }

    std::uint32_t next_u32();
    std::uint64_t next_u64();  // two u32 draws, low word first

    // Unbiased integer in [0, bound) by rejection; bound >= 1.
    std::uint32_t uniform_below(std::uint32_t bound);

    // Uniform in [0, 1) with 53 random mantissa bits.
    double next_unit();

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int buffered_ = 0;  // unread words remaining in buffer_
};

}  // namespace limitlab
