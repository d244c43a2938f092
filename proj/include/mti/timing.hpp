#pragma once

// Air-interface timing model shared by the protocols.
//
// A 1-bit reader message costs t_s = 0.4 ms, a 96-bit message t_tag = 2.4 ms,
// and a w-bit tag string t_w(w) = 0.4 + (w - 1) * 0.025 ms, so each extra bit
// costs 0.025 ms. Long reader broadcasts are sent as back-to-back 96-bit
// messages.

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace mti {

inline constexpr double kShortMs = 0.4;     // 1-bit reader message
inline constexpr double kTagMs = 2.4;       // 96-bit message (e.g. a tag id)
inline constexpr double kBitMs = 0.025;     // marginal cost per bit

// Duration of a w-bit tag response slot.
inline double string_time_ms(int w) {
  if (w < 1) throw std::invalid_argument("string_time_ms: w must be >= 1");
  return kShortMs + (w - 1) * kBitMs;
}

// Reader broadcast of `bits` bits, sent as ceil(bits/96) 96-bit messages.
inline double vector_broadcast_time_ms(std::uint64_t bits) {
  return static_cast<double>((bits + 95) / 96) * kTagMs;
}

}  // namespace mti
