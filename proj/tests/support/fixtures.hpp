#pragma once

// Deterministic id search for worked-example fixtures: walks a fixed id
// sequence until a predicate holds, so tests can construct tags with exact
// hash properties (bucket positions, split bits) without touching library
// internals.

#include <cstdint>
#include <stdexcept>

#include "mti/rng.hpp"
#include "mti/tag.hpp"

namespace testsupport {

inline mti::TagId scan_id(std::uint64_t k) {
  const std::uint64_t lo = mti::mix64(0xF1357u + (k + 1) * mti::kGoldenGamma);
  return {mti::mix64(lo ^ 0x5A5A5A5A5A5A5A5Aull) & 0xFFFFFFFFull, lo};
}

// Finds the next id (from *cursor on) satisfying pred; advances the cursor
// past it so successive calls return distinct ids.
template <class Pred>
mti::TagId find_id(Pred&& pred, std::uint64_t& cursor) {
  for (std::uint64_t tries = 0; tries < 10'000'000; ++tries) {
    const mti::TagId id = scan_id(cursor++);
    if (pred(id)) return id;
  }
  throw std::runtime_error("find_id: no id satisfied the predicate");
}

}  // namespace testsupport
