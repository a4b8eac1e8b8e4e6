#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace torsion {

/// Philox4x32-10 block function: maps a 128-bit counter and 64-bit key to
/// 128 bits of output. Pure function, no state.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// 64-bit avalanche mix (SplitMix64 finalizer), used to derive stream ids.
std::uint64_t mix64(std::uint64_t z);

/**
 * Counter-based random stream.
 *
 * A stream is identified by (seed, stream id). The k-th 128-bit block of the
 * stream is philox(counter = {k, id}, key = seed), so any draw is a pure
 * function of its coordinates. Sub-streams hash the child index into the id,
 * which is how every walk, path and sample gets its own independent stream
 * regardless of which worker runs it.
 */
class RandomStream
{
  public:
    explicit RandomStream(std::uint64_t seed, std::uint64_t id = 0) noexcept
        : seed_(seed), id_(id)
    {
    }

    /// Independent child stream keyed by `index`.
    [[nodiscard]] RandomStream substream(std::uint64_t index) const noexcept;

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t id() const noexcept { return id_; }

    std::uint64_t next_u64();

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Uniform on (0, 1).
    double uniform_open();
    /// Standard normal (Box-Muller, pairs cached).
    double normal();
    /// Uniform direction on the unit sphere S^{n-1}; writes into `out`.
    void unit_vector(std::span<double> out);
    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound);

  private:
    void refill();

    std::uint64_t seed_;
    std::uint64_t id_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int used_ = 4;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace torsion
