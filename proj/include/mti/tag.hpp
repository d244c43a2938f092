#pragma once

// 96-bit tag identifiers and the seeded hash family used by the protocols.
//
// The hash is a splitmix64-finalizer chain over (seed, id.hi, id.lo). It is
// deterministic, portable, and uniform enough to pass a chi-square test at
// significance 0.001 (see tests). hash_slot maps into 1-based positions,
// matching the protocol conventions throughout.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "mti/rng.hpp"

namespace mti {

struct TagId {
  std::uint64_t hi = 0;  // top 32 bits of the 96-bit id (only low 32 of hi used)
  std::uint64_t lo = 0;

  friend constexpr bool operator==(const TagId&, const TagId&) = default;
  friend constexpr auto operator<=>(const TagId&, const TagId&) = default;
};

// 24 lowercase hex chars, most significant first.
inline std::string to_hex(const TagId& id) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(24, '0');
  std::uint64_t hi = id.hi, lo = id.lo;
  for (int i = 7; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[hi & 0xF];
    hi >>= 4;
  }
  for (int i = 23; i >= 8; --i) {
    out[static_cast<std::size_t>(i)] = digits[lo & 0xF];
    lo >>= 4;
  }
  return out;
}

inline TagId parse_tag_id(std::string_view hex) {
  if (hex.size() != 24) throw std::invalid_argument("tag id must be 24 hex chars");
  auto nibble = [](char c) -> std::uint64_t {
    if (c >= '0' && c <= '9') return static_cast<std::uint64_t>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<std::uint64_t>(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return static_cast<std::uint64_t>(c - 'A' + 10);
    throw std::invalid_argument("tag id contains a non-hex character");
  };
  TagId id;
  for (int i = 0; i < 8; ++i) id.hi = (id.hi << 4) | nibble(hex[static_cast<std::size_t>(i)]);
  for (int i = 8; i < 24; ++i) id.lo = (id.lo << 4) | nibble(hex[static_cast<std::size_t>(i)]);
  return id;
}

inline constexpr std::uint64_t hash96(const TagId& id, Seed seed) noexcept {
  std::uint64_t h = mix64(seed + kGoldenGamma);
  h = mix64(h ^ id.hi);
  h = mix64(h ^ id.lo);
  return h;
}

// Uniform position in [1, f]. f = 0 is meaningless.
inline std::uint64_t hash_slot(const TagId& id, Seed seed, std::uint64_t f) {
  if (f == 0) throw std::invalid_argument("hash_slot: f must be >= 1");
  return hash96(id, seed) % f + 1;
}

// Uniform bit in {0, 1}.
inline constexpr int hash_binary(const TagId& id, Seed seed) noexcept {
  return static_cast<int>(hash96(id, seed) & 1u);
}

}  // namespace mti
