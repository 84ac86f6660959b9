#pragma once

// Philox4x32-10 counter-based generator.  Gaussian increments are keyed by
// (seed, channel, step) so ensembles are order-independent and replayable.

#include <array>
#include <cmath>
#include <cstdint>

namespace lz3::detail {

inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
  constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(M0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(M1) * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
           static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
           static_cast<std::uint32_t>(p0)};
    key[0] += W0;
    key[1] += W1;
  }
  return ctr;
}

// Standard normal draw for noise channel `channel` at global step `step`.
inline double counter_normal(std::uint64_t seed, std::uint32_t channel,
                             std::uint64_t step) {
  const auto x = philox4x32(
      {static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(step >> 32),
       channel, 0u},
      {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
  const std::uint64_t v1 = (static_cast<std::uint64_t>(x[0]) << 32) | x[1];
  const std::uint64_t v2 = (static_cast<std::uint64_t>(x[2]) << 32) | x[3];
  const double u1 = static_cast<double>((v1 >> 11) + 1) * 0x1p-53;  // (0, 1]
  const double u2 = static_cast<double>(v2 >> 11) * 0x1p-53;        // [0, 1)
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.28318530717958647692 * u2);
}

}  // namespace lz3::detail
