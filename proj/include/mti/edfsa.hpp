#pragma once

// EDFSA baseline: plain framed slotted Aloha ID collection, used as the
// comparison curve. Present tags pick a slot per frame by hash; a singleton
// slot reads the tag's 96-bit ID, a collision makes its tags retry. Missing
// tags are whatever never shows up.
//
// Slot accounting: the reader runs fixed-length slots sized for an ID reply,
// so every slot costs t_tag regardless of outcome. The first frame spans the
// whole candidate list (f = N); later frames match the uncollected backlog
// (f = remaining present count, the idealized estimate), which keeps the load
// at one tag per slot. Consequence of the fixed-slot convention: a field with
// no tags at all still pays one all-empty frame of N slots at t_tag each.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mti/inventory.hpp"
#include "mti/result.hpp"
#include "mti/rng.hpp"
#include "mti/tag.hpp"
#include "mti/timing.hpp"

namespace mti {

struct EdfsaFrame {
  std::uint64_t f = 0;          // frame length in slots
  std::uint64_t empty = 0;      // slot counts by outcome
  std::uint64_t singleton = 0;
  std::uint64_t collision = 0;
};

struct EdfsaTrace {
  std::vector<EdfsaFrame> frames;
};

inline IdentificationResult run_edfsa(const Inventory& inv, Seed run_seed,
                                      EdfsaTrace* trace = nullptr) {
  IdentificationResult res;
  if (inv.n() == 0) return res;

  std::vector<std::uint32_t> pending;  // present tags not yet collected
  for (std::size_t c = 0; c < inv.n(); ++c)
    if (inv.present[c]) pending.push_back(static_cast<std::uint32_t>(c));
  std::vector<std::uint8_t> collected(inv.n(), 0);

  SplitMix64 seeder(derive_seed(run_seed, 0x99u));
  std::vector<std::uint32_t> slot_count, slot_tag;
  bool first_frame = true;

  while (first_frame || !pending.empty()) {
    const std::uint64_t f =
        first_frame ? inv.n() : std::max<std::uint64_t>(1, pending.size());
    first_frame = false;
    const Seed r = seeder.next();

    slot_count.assign(f, 0);
    slot_tag.assign(f, 0);
    for (std::uint32_t c : pending) {
      const std::uint64_t s = hash_slot(inv.tags[c], r, f) - 1;
      ++slot_count[s];
      slot_tag[s] = c;
    }

    EdfsaFrame frame;
    frame.f = f;
    for (std::uint64_t s = 0; s < f; ++s) {
      if (slot_count[s] == 0) ++frame.empty;
      else if (slot_count[s] == 1) {
        ++frame.singleton;
        collected[slot_tag[s]] = 1;
      } else ++frame.collision;
    }

    res.elapsed_ms += static_cast<double>(f) * kTagMs;  // fixed-length slots
    res.slots_used += f;
    res.tag_bits += static_cast<std::uint64_t>(pending.size()) * 96;
    ++res.rounds;
    if (trace) trace->frames.push_back(frame);

    std::erase_if(pending, [&](std::uint32_t c) { return collected[c] != 0; });
    if (res.rounds > 10'000'000)
      throw std::logic_error("run_edfsa: no progress");  // unreachable
  }

  for (std::size_t c = 0; c < inv.n(); ++c) {
    if (collected[c]) {
      res.identified_present.push_back(inv.tags[c]);
      res.false_negatives += !inv.present[c];
    } else {
      res.identified_missing.push_back(inv.tags[c]);
      res.false_positives += inv.present[c];
    }
  }
  return res;
}

}  // namespace mti
