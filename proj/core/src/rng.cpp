#include "lrp/rng.hpp"

#include <cmath>
#include <numbers>

namespace lrp {
namespace philox {
namespace {

constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
constexpr std::uint32_t kMult0 = 0xD2511F53u;
constexpr std::uint32_t kMult1 = 0xCD9E8D57u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(product >> 32);
    lo = static_cast<std::uint32_t>(product);
}

inline Counter round_once(const Counter& x, const Key& k) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMult0, x[0], hi0, lo0);
    mulhilo(kMult1, x[2], hi1, lo1);
    return {hi1 ^ x[1] ^ k[0], lo1, hi0 ^ x[3] ^ k[1], lo0};
}

}  // namespace

Counter block(Counter counter, Key key) {
    for (int r = 0; r < 10; ++r) {
        if (r > 0) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        counter = round_once(counter, key);
    }
    return counter;
}

}  // namespace philox

std::uint64_t PairStream::next_u64() {
    if (available_ < 2) {
        buffer_ = philox::block(base_, key_);
        base_[0] += 1;  // block counter within the cell
        available_ = 4;
    }
    const std::uint32_t lo = buffer_[4 - available_];
    const std::uint32_t hi = buffer_[4 - available_ + 1];
    available_ -= 2;
    return (static_cast<std::uint64_t>(hi) << 32) | lo;
}

double PairStream::normal() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace lrp
