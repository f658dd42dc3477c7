#include "limitlab/rng.hpp"

#include "limitlab/errors.hpp"

namespace limitlab {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline std::array<std::uint32_t, 4> round_once(const std::array<std::uint32_t, 4>& c,
                                               const std::array<std::uint32_t, 2>& k) {
    const std::uint64_t prod0 = std::uint64_t(kMul0) * c[0];
    const std::uint64_t prod1 = std::uint64_t(kMul1) * c[2];
    return {static_cast<std::uint32_t>(prod1 >> 32) ^ c[1] ^ k[0],
            static_cast<std::uint32_t>(prod1),
            static_cast<std::uint32_t>(prod0 >> 32) ^ c[3] ^ k[1],
            static_cast<std::uint32_t>(prod0)};
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) {
    for (int r = 0; r < 10; ++r) {
        if (r > 0) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        counter = round_once(counter, key);
    }
    return counter;
}

std::uint32_t RngStream::next_u32() {
    if (buffered_ == 0) {
        const std::array<std::uint32_t, 4> counter = {
            static_cast<std::uint32_t>(block_),
            static_cast<std::uint32_t>(block_ >> 32),
            static_cast<std::uint32_t>(stream_),
            static_cast<std::uint32_t>(stream_ >> 32)};
        const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed_),
                                                  static_cast<std::uint32_t>(seed_ >> 32)};
        buffer_ = philox4x32(counter, key);
        ++block_;
        buffered_ = 4;
    }
    return buffer_[4 - buffered_--];
}

std::uint64_t RngStream::next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return lo | (hi << 32);
}

std::uint32_t RngStream::uniform_below(std::uint32_t bound) {
    if (bound == 0) throw domain_error("uniform_below: bound must be >= 1");
    // Reject draws above the largest multiple of bound.
    const std::uint32_t limit = static_cast<std::uint32_t>(-bound) % bound;  // 2^32 mod bound
    for (;;) {
        const std::uint32_t draw = next_u32();
        if (draw >= limit) return draw % bound;
    }
}

double RngStream::next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

}  // namespace limitlab
