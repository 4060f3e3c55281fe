#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace frostree {

/// SplitMix64 finaliser. Used to derive stream seeds.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Reproducible per-replica random stream.
///
/// The generator is xoshiro256** whose 256-bit state is derived only from
/// (master_seed, stream_index):
///
///     key      = mix64(master_seed) ^ mix64(stream_index ^ 0xD1B54A32D192ED03)
///     state[k] = mix64(key + (k + 1) * 0x9E3779B97F4A7C15),  k = 0..3
///
/// so stream i draws the same numbers no matter which thread runs it or in
/// what order. Bounded integers use Lemire's multiply-and-reject method and
/// never touch <random> distributions, whose output is implementation
/// defined.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_index) noexcept
        : master_seed_(master_seed), stream_index_(stream_index) {
        const std::uint64_t key = mix64(master_seed) ^ mix64(stream_index ^ 0xD1B54A32D192ED03ULL);
        for (std::size_t k = 0; k < 4; ++k) s_[k] = mix64(key + (k + 1) * 0x9E3779B97F4A7C15ULL);
    }

    std::uint64_t master_seed() const noexcept { return master_seed_; }
    std::uint64_t stream_index() const noexcept { return stream_index_; }

    std::uint64_t next() noexcept {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform integer in [0, k). Requires k >= 1.
    std::size_t below(std::size_t k) noexcept {
        const std::uint64_t bound = k;
        unsigned __int128 product = static_cast<unsigned __int128>(next()) * bound;
        std::uint64_t low = static_cast<std::uint64_t>(product);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                product = static_cast<unsigned __int128>(next()) * bound;
                low = static_cast<std::uint64_t>(product);
            }
        }
        return static_cast<std::size_t>(product >> 64);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

    std::uint64_t master_seed_;
    std::uint64_t stream_index_;
    std::array<std::uint64_t, 4> s_{};
};

}  // namespace frostree
