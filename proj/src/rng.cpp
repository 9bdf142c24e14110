#include "ssvlab/rng.hpp"

#include <cmath>

namespace ssv {

namespace {

constexpr std::uint64_t kPhiloxM = 0xD2B74407B1CE6E93ULL;
constexpr std::uint64_t kWeyl = 0x9E3779B97F4A7C15ULL;

inline void philox2x64(std::uint64_t key, std::uint64_t c0, std::uint64_t c1,
                       std::uint64_t out[2]) {
    std::uint64_t x0 = c0, x1 = c1, k = key;
    for (int r = 0; r < 10; ++r) {
        const auto prod = static_cast<unsigned __int128>(kPhiloxM) * x0;
        const auto hi = static_cast<std::uint64_t>(prod >> 64);
        const auto lo = static_cast<std::uint64_t>(prod);
        x0 = hi ^ k ^ x1;
        x1 = lo;
        k += kWeyl;
    }
    out[0] = x0;
    out[1] = x1;
}

} // namespace

std::uint64_t mix64(std::uint64_t z) {
    z += kWeyl;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_key(std::uint64_t parent, std::uint64_t tag) {
    return mix64(parent ^ mix64(tag + 0x632BE59BD9B4E019ULL));
}

std::uint64_t CounterRng::next_u64() {
    if (have_ == 0) {
        philox2x64(key_ ^ mix64(lane_), block_++, lane_, buf_);
        have_ = 2;
    }
    return buf_[2 - have_--];
}

double CounterRng::uniform_oo() {
    // 53-bit mantissa shifted to the open interval.
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::uniform_oc() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

double CounterRng::sign() {
    return (next_u64() & 1u) ? 1.0 : -1.0;
}

double CounterRng::gaussian() {
    const double u1 = uniform_oc();
    const double u2 = uniform_oo();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double CounterRng::exponential() {
    return -std::log(uniform_oc());
}

} // namespace ssv
