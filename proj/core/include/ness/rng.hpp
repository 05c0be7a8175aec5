#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace ness {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// The key is the 64-bit seed; the upper half of the 128-bit counter selects
/// an independent stream, the lower half counts blocks within the stream.
/// Satisfies UniformRandomBitGenerator.
class Philox4x32 {
public:
    using result_type = std::uint32_t;
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    Philox4x32(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          ctr_{0, 0, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)} {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        if (pos_ == 4) {
            buf_ = block(ctr_, key_);
            if (++ctr_[0] == 0) ++ctr_[1];
            pos_ = 0;
        }
        return buf_[pos_++];
    }

    /// The raw bijection: ten rounds over `ctr` keyed by `key`.
    static Counter block(Counter ctr, Key key) {
        constexpr std::uint32_t kM0 = 0xD2511F53u;
        constexpr std::uint32_t kM1 = 0xCD9E8D57u;
        constexpr std::uint32_t kW0 = 0x9E3779B9u;
        constexpr std::uint32_t kW1 = 0xBB67AE85u;
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
                   static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
                   static_cast<std::uint32_t>(p0)};
            key[0] += kW0;
            key[1] += kW1;
        }
        return ctr;
    }

private:
    Key key_;
    Counter ctr_;
    Counter buf_{};
    int pos_ = 4;
};

}  // namespace ness
