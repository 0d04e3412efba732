#include "slv/rng.hpp"

#include <cmath>

namespace slv {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void philox_round(std::array<std::uint32_t, 4>& c, std::uint32_t k0,
                         std::uint32_t k1) {
    const std::uint64_t p0 = std::uint64_t(kPhiloxM0) * c[0];
    const std::uint64_t p1 = std::uint64_t(kPhiloxM1) * c[2];
    const std::uint32_t hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
    const std::uint32_t hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
    c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
}

} // namespace

void RngStream::refill() {
    std::array<std::uint32_t, 4> c = {
        std::uint32_t(block_), std::uint32_t(block_ >> 32),
        std::uint32_t(stream_), std::uint32_t(stream_ >> 32)};
    std::uint32_t k0 = std::uint32_t(seed_);
    std::uint32_t k1 = std::uint32_t(seed_ >> 32);
    for (int round = 0; round < 10; ++round) {
        philox_round(c, k0, k1);
        k0 += kPhiloxW0;
        k1 += kPhiloxW1;
    }
    buf_ = c;
    ++block_;
    idx_ = 0;
}

std::uint32_t RngStream::next_u32() {
    if (idx_ >= 4) refill();
    return buf_[idx_++];
}

std::uint64_t RngStream::next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return (hi << 32) | lo;
}

double RngStream::uniform01() {
    // 53-bit mantissa shifted into (0,1); both endpoints excluded so that
    // log() and the CMS transform never see 0 or 1.
    return (double((next_u64() >> 11)) + 0.5) * 0x1.0p-53;
}

double sample_gaussian(RngStream& rng) {
    const double u1 = rng.uniform01();
    const double u2 = rng.uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
}

} // namespace slv
