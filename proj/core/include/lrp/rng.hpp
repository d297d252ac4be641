// Counter-based randomness (Philox4x32-10, Salmon et al. SC'11). Every draw
// is a pure function of (seed, realization, i, j, block), so matrix sampling
// is order-independent and reproducible under any parallel schedule.
#pragma once

#include <array>
#include <cstdint>

namespace lrp {

namespace philox {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

Counter block(Counter counter, Key key);

}  // namespace philox

// Stream of doubles attached to one (seed, realization, i, j) cell. Draws
// consume Philox blocks in a fixed order; the stream owns no global state.
class PairStream {
public:
    PairStream(std::uint64_t seed, std::uint64_t realization, std::uint32_t i, std::uint32_t j)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          base_{0u, i, j, static_cast<std::uint32_t>(realization)} {
        // realizations beyond 2^32 fold into the key to keep streams distinct
        key_[1] ^= static_cast<std::uint32_t>(realization >> 32);
    }

    // Uniform on (0, 1), 53-bit resolution, never exactly 0 or 1.
    double uniform01() {
        const std::uint64_t bits = next_u64();
        return (static_cast<double>(bits >> 11) + 0.5) * (1.0 / 9007199254740992.0);
    }

    // Standard normal via Box-Muller (deterministic, rejection-free).
    double normal();

    std::uint64_t next_u64();

private:
    philox::Key key_;
    philox::Counter base_;
    philox::Counter buffer_{};
    int available_ = 0;  // u32 words left in buffer_
};

}  // namespace lrp
