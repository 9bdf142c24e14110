#pragma once

#include <cstdint>

namespace ssv {

/// Counter-based deterministic random stream.
///
/// Every stream is addressed by a 64-bit key plus a 64-bit lane; draws are a
/// pure function of (key, lane, draw index), so identical addressing yields
/// bit-identical output no matter how work is scheduled across threads.
/// Matrix samplers put the entry coordinate (i, j) into the lane, which gives
/// each entry its own stream derived from (root seed, trial, i, j).
///
/// The core is a Philox-style 2x64 bijection (10 rounds of multiply-hi-lo
/// mixing with a Weyl key schedule).
class CounterRng {
public:
    explicit CounterRng(std::uint64_t key, std::uint64_t lane = 0)
        : key_(key), lane_(lane) {}

    /// Stream for matrix entry (i, j) under the given key.
    static CounterRng for_entry(std::uint64_t key, std::uint32_t i, std::uint32_t j) {
        return CounterRng(key, (static_cast<std::uint64_t>(i) << 32) | j);
    }

    std::uint64_t next_u64();

    /// Uniform on the open interval (0, 1).
    double uniform_oo();
    /// Uniform on the half-open interval (0, 1].
    double uniform_oc();
    /// Fair sign, +1 or -1.
    double sign();
    /// Standard normal (Box-Muller, two uniforms per draw).
    double gaussian();
    /// Exponential with unit rate.
    double exponential();

    std::uint64_t key() const { return key_; }
    std::uint64_t lane() const { return lane_; }

private:
    std::uint64_t key_;
    std::uint64_t lane_;
    std::uint64_t block_ = 0;
    std::uint64_t buf_[2] = {0, 0};
    int have_ = 0;
};

/// Derives a child stream key from a parent key and a tag. Used to split the
/// root seed into per-trial and per-role keys.
std::uint64_t derive_key(std::uint64_t parent, std::uint64_t tag);

/// SplitMix64 finalizer; the basic 64-bit mixing step behind derive_key.
std::uint64_t mix64(std::uint64_t z);

/// Stream roles, so that label bits, small/large conditional draws and
/// surrogate gaussians never share a stream even at the same (i, j).
enum class StreamRole : std::uint64_t {
    Entry = 0,
    Label = 1,
    Small = 2,
    Large = 3,
    Surrogate = 4,
    Aux = 5,
};

inline std::uint64_t role_key(std::uint64_t key, StreamRole role) {
    return derive_key(key, static_cast<std::uint64_t>(role));
}

} // namespace ssv
