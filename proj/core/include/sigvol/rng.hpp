#pragma once

#include <array>
#include <cstdint>

namespace sigvol {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123).
///
/// Every draw is a pure function of (key, counter), so a simulated quantity can
/// be addressed directly by its coordinates instead of by stream position.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    explicit constexpr Philox4x32(Key key) : key_(key) {}
    explicit constexpr Philox4x32(std::uint64_t seed)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

    constexpr Counter operator()(Counter ctr) const {
        Key k = key_;
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                k[0] += 0x9E3779B9u;
                k[1] += 0xBB67AE85u;
            }
            const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ k[0], static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ k[1], static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }

private:
    Key key_;
};

/// Independent random streams sharing one seed.
enum class Stream : std::uint16_t {
    grid_increments = 0,  ///< uniform-grid Brownian increments
    dyadic_bridge = 1,    ///< Levy construction on dyadic grids
    auxiliary = 2,        ///< extra draws used by diagnostics and tests
};

/// Standard normal draw addressed by (seed, path, step, coordinate, stream).
double counter_normal(std::uint64_t seed, std::uint64_t path, std::uint32_t step, std::uint16_t coordinate,
                      Stream stream = Stream::grid_increments);

/// Uniform draw in [0, 1) addressed like counter_normal.
double counter_uniform(std::uint64_t seed, std::uint64_t path, std::uint32_t step, std::uint16_t coordinate,
                       Stream stream = Stream::auxiliary);

} // namespace sigvol
