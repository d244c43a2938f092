#pragma once

// Bit-tracking channel: what the reader sees when several tags answer in the
// same slot with synchronized w-bit strings.
//
// Manchester superposition gives four per-bit outcomes: every transmitter
// sent 0 (Zero), every transmitter sent 1 (One), values differed (Collision,
// printed X), or nothing was transmitted at all (Silence, printed -). A tag
// that answers in a slot drives all w bit positions, so Silence appears only
// in slots nobody answered. The reader's presence verdict per bit: One or
// Collision means somebody is there, Zero or Silence means nobody is.
//
// transmit_slot layers two impairments on top, both deterministic per
// (seed, slot index): a detection error drops a whole tag string with the
// configured probability, and the capture effect makes one surviving string
// decode alone when several collide.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mti/rng.hpp"
#include "mti/tag.hpp"

namespace mti {

enum class BitSymbol : std::uint8_t { Zero, One, Collision, Silence };
enum class Verdict : std::uint8_t { Absent, Present };

using ReceivedString = std::vector<BitSymbol>;

struct TagString {
  TagId owner;
  std::vector<std::uint8_t> bits;  // one value per bit position, length w
};

// One-hot string: bit `bit` (1-based) set, everything else 0.
inline TagString make_one_hot(const TagId& owner, int w, int bit) {
  if (w < 1) throw std::invalid_argument("make_one_hot: w must be >= 1");
  if (bit < 1 || bit > w) throw std::invalid_argument("make_one_hot: bit outside [1, w]");
  TagString s{owner, std::vector<std::uint8_t>(static_cast<std::size_t>(w), 0)};
  s.bits[static_cast<std::size_t>(bit - 1)] = 1;
  return s;
}

inline constexpr Verdict verdict(BitSymbol s) noexcept {
  return (s == BitSymbol::One || s == BitSymbol::Collision) ? Verdict::Present
                                                            : Verdict::Absent;
}

// Error-free superposition of full-length strings.
inline ReceivedString superpose(std::span<const TagString> strings, int w) {
  if (w < 1) throw std::invalid_argument("superpose: w must be >= 1");
  for (const TagString& s : strings)
    if (s.bits.size() != static_cast<std::size_t>(w))
      throw std::invalid_argument("superpose: string length != w");

  ReceivedString out(static_cast<std::size_t>(w), BitSymbol::Silence);
  if (strings.empty()) return out;
  for (std::size_t b = 0; b < static_cast<std::size_t>(w); ++b) {
    bool any0 = false, any1 = false;
    for (const TagString& s : strings) (s.bits[b] ? any1 : any0) = true;
    out[b] = (any0 && any1) ? BitSymbol::Collision : (any1 ? BitSymbol::One : BitSymbol::Zero);
  }
  return out;
}

struct ChannelConfig {
  double detection_error_prob = 0.0;  // per-tag, per-slot chance the string is too weak
  double capture_prob = 0.0;          // chance a multi-tag slot decodes as one string
  Seed seed = 0;
};

// Superposition with impairments. slot_index must be unique per slot within a
// run so results are reproducible and slot-independent.
inline ReceivedString transmit_slot(std::span<const TagString> strings, int w,
                                    const ChannelConfig& cfg, std::uint64_t slot_index) {
  if (cfg.detection_error_prob < 0.0 || cfg.detection_error_prob > 1.0 ||
      cfg.capture_prob < 0.0 || cfg.capture_prob > 1.0)
    throw std::invalid_argument("transmit_slot: probabilities outside [0, 1]");

  SplitMix64 rng(derive_seed(cfg.seed, slot_index));
  std::vector<TagString> survivors;
  survivors.reserve(strings.size());
  for (const TagString& s : strings)
    if (!(rng.next_double() < cfg.detection_error_prob)) survivors.push_back(s);

  if (survivors.size() >= 2 && rng.next_double() < cfg.capture_prob) {
    const std::size_t winner = static_cast<std::size_t>(rng.next_below(survivors.size()));
    return superpose(std::span<const TagString>(&survivors[winner], 1), w);
  }
  return superpose(std::span<const TagString>(survivors.data(), survivors.size()), w);
}

inline constexpr char to_char(BitSymbol s) noexcept {
  switch (s) {
    case BitSymbol::Zero: return '0';
    case BitSymbol::One: return '1';
    case BitSymbol::Collision: return 'X';
    case BitSymbol::Silence: return '-';
  }
  return '?';
}

inline std::string to_string(const ReceivedString& r) {
  std::string out;
  out.reserve(r.size());
  for (BitSymbol s : r) out.push_back(to_char(s));
  return out;
}

inline ReceivedString parse_received(std::string_view text) {
  ReceivedString out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '0': out.push_back(BitSymbol::Zero); break;
      case '1': out.push_back(BitSymbol::One); break;
      case 'X': out.push_back(BitSymbol::Collision); break;
      case '-': out.push_back(BitSymbol::Silence); break;
      default: throw std::invalid_argument("parse_received: expected only 0, 1, X, -");
    }
  }
  return out;
}

}  // namespace mti
