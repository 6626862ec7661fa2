#include "sigvol/rng.hpp"

#include <cmath>
#include <numbers>

namespace sigvol {

namespace {

Philox4x32::Counter make_counter(std::uint64_t path, std::uint32_t step, std::uint16_t coordinate, Stream stream) {
    return {static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32), step,
            static_cast<std::uint32_t>(coordinate) | (static_cast<std::uint32_t>(stream) << 16)};
}

// 53-bit uniform in [0, 1).
double to_unit(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = ((std::uint64_t{hi} << 32) | lo) >> 11;
    return static_cast<double>(bits) * 0x1.0p-53;
}

} // namespace

double counter_normal(std::uint64_t seed, std::uint64_t path, std::uint32_t step, std::uint16_t coordinate,
                      Stream stream) {
    const auto r = Philox4x32(seed)(make_counter(path, step, coordinate, stream));
    const double u1 = 1.0 - to_unit(r[0], r[1]);  // (0, 1]
    const double u2 = to_unit(r[2], r[3]);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double counter_uniform(std::uint64_t seed, std::uint64_t path, std::uint32_t step, std::uint16_t coordinate,
                       Stream stream) {
    const auto r = Philox4x32(seed)(make_counter(path, step, coordinate, stream));
    return to_unit(r[0], r[1]);
}

} // namespace sigvol
