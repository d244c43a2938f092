#pragma once

// SSMTI: string-based missing tag identification.
//
// The reader first *arranges* the candidate set: repeated rounds assign every
// candidate a unique serial value chi in 1..N using only the stored ids, so
// missing tags get values too. Each round hashes the unarranged tags into a
// main vector of f2 buckets (f2 = N*/1.5 at the optimal load), marks buckets
// holding one tag (code 1) or a reconcilable pair (code 4: the two ids differ
// under a one-bit hash), and broadcasts an indicator vector V2 in which those
// buckets cost two bits ("10"/"11") and the rest one bit ("0"). A tag reads
// its own bucket's code and counts the 10/11 prefix to derive chi; pairs
// split their bucket by the one-bit hash. Unassigned tags roll into the next
// round, whose values continue after the mu values already arranged.
//
// Verification then walks the chi space in ceil(N/w) slots of w bits: the tag
// with value chi answers in slot ceil(chi/w) with a one-hot string at bit
// ((chi-1) mod w) + 1. A One or Collision symbol at a bit proves its tag
// present; Zero or Silence declares it missing.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mti/channel.hpp"
#include "mti/inventory.hpp"
#include "mti/result.hpp"
#include "mti/rng.hpp"
#include "mti/tag.hpp"
#include "mti/timing.hpp"

namespace mti {

struct SsmtiParams {
  std::uint64_t f2 = 1;  // main vector length
  Seed r1 = 0;           // bucket hash seed
  Seed r2 = 0;           // pair-splitting hash seed
  std::uint64_t mu = 0;  // serial values already assigned in earlier rounds
};

// Main vector codes.
inline constexpr std::uint8_t kBucketDeferred = 0;       // empty or >= 3 tags
inline constexpr std::uint8_t kBucketSingle = 1;         // exactly 1 tag
inline constexpr std::uint8_t kBucketPair = 2;           // exactly 2, not yet reconciled
inline constexpr std::uint8_t kBucketUnreconcilable = 3; // pair, same split bit
inline constexpr std::uint8_t kBucketReconciled = 4;     // pair, distinct split bits

struct MainVector {
  std::uint64_t f2 = 0;
  std::vector<std::uint8_t> code;                   // per bucket
  std::vector<std::vector<std::uint32_t>> members;  // candidate indices per bucket
};

inline MainVector build_main_vector(std::span<const TagId> ids,
                                    std::span<const std::uint32_t> candidates,
                                    const SsmtiParams& params) {
  if (params.f2 < 1) throw std::invalid_argument("build_main_vector: f2 must be >= 1");
  MainVector mv;
  mv.f2 = params.f2;
  mv.code.assign(params.f2, kBucketDeferred);
  mv.members.assign(params.f2, {});
  for (std::uint32_t c : candidates) {
    const std::uint64_t b = hash_slot(ids[c], params.r1, params.f2) - 1;
    mv.members[b].push_back(c);
  }
  for (std::uint64_t b = 0; b < params.f2; ++b) {
    const std::size_t k = mv.members[b].size();
    mv.code[b] = k == 1 ? kBucketSingle : k == 2 ? kBucketPair : kBucketDeferred;
  }
  return mv;
}

// Splits every pair bucket by hash_binary under r2: distinct bits make the
// pair reconcilable (code 4, the bit-0 tag ordered first so it takes the
// earlier serial value); equal bits defer both tags (code 3).
inline MainVector reconcile(MainVector mv, std::span<const TagId> ids, Seed r2) {
  for (std::uint64_t b = 0; b < mv.f2; ++b) {
    if (mv.code[b] != kBucketPair) continue;
    auto& m = mv.members[b];
    const int bit0 = hash_binary(ids[m[0]], r2);
    const int bit1 = hash_binary(ids[m[1]], r2);
    if (bit0 == bit1) {
      mv.code[b] = kBucketUnreconcilable;
    } else {
      mv.code[b] = kBucketReconciled;
      if (bit0 == 1) std::swap(m[0], m[1]);
    }
  }
  return mv;
}

// Append vector: one bit per useful bucket, 0 for a singleton, 1 for a
// reconciled pair, in bucket order.
inline std::vector<std::uint8_t> build_append_vector(const MainVector& mv) {
  std::vector<std::uint8_t> append;
  for (std::uint64_t b = 0; b < mv.f2; ++b) {
    if (mv.code[b] == kBucketPair)
      throw std::logic_error("build_append_vector: main vector not reconciled");
    if (mv.code[b] == kBucketSingle) append.push_back(0);
    else if (mv.code[b] == kBucketReconciled) append.push_back(1);
  }
  return append;
}

// Indicator vector V2. Wire encoding per element: "0" (wait, 1 bit), "10"
// (singleton, 2 bits) or "11" (reconciled pair, 2 bits); the stored code value
// is the wire value.
inline constexpr std::uint8_t kV2Wait = 0;
inline constexpr std::uint8_t kV2Single = 2;  // bits "10"
inline constexpr std::uint8_t kV2Pair = 3;    // bits "11"

struct IndicatorV2 {
  std::uint64_t f2 = 0;
  std::vector<std::uint8_t> code;  // kV2Wait / kV2Single / kV2Pair per element

  std::uint64_t broadcast_bits() const {
    std::uint64_t two_bit = 0;
    for (std::uint8_t c : code) two_bit += (c != kV2Wait);
    return f2 + two_bit;
  }
};

inline IndicatorV2 build_indicator_v2(const MainVector& mv,
                                      std::span<const std::uint8_t> append) {
  IndicatorV2 v2;
  v2.f2 = mv.f2;
  v2.code.assign(mv.f2, kV2Wait);
  std::size_t a = 0;
  for (std::uint64_t b = 0; b < mv.f2; ++b) {
    if (mv.code[b] == kBucketPair)
      throw std::logic_error("build_indicator_v2: main vector not reconciled");
    if (mv.code[b] != kBucketSingle && mv.code[b] != kBucketReconciled) continue;
    const std::uint8_t expected = mv.code[b] == kBucketSingle ? 0 : 1;
    if (a >= append.size() || append[a] != expected)
      throw std::invalid_argument("build_indicator_v2: append vector inconsistent with main vector");
    v2.code[b] = mv.code[b] == kBucketSingle ? kV2Single : kV2Pair;
    ++a;
  }
  if (a != append.size())
    throw std::invalid_argument("build_indicator_v2: append vector inconsistent with main vector");
  return v2;
}

// Tag-side V2 processing: the serial value this tag takes in this round, or
// nullopt if its bucket told it to wait. Mirrors what a tag computes from the
// broadcast alone.
inline std::optional<std::uint64_t> tag_process_v2(const TagId& id, const IndicatorV2& v2,
                                                   const SsmtiParams& params) {
  const std::uint64_t bucket = hash_slot(id, params.r1, v2.f2) - 1;
  if (v2.code[bucket] == kV2Wait) return std::nullopt;
  std::uint64_t singles = 0, pairs = 0;
  for (std::uint64_t b = 0; b < bucket; ++b) {
    singles += (v2.code[b] == kV2Single);
    pairs += (v2.code[b] == kV2Pair);
  }
  const std::uint64_t base = params.mu + singles + 2 * pairs;
  if (v2.code[bucket] == kV2Single) return base + 1;
  return base + 1 + static_cast<std::uint64_t>(hash_binary(id, params.r2));
}

struct ArrangementRound {
  std::uint64_t f2 = 0;
  Seed r1 = 0, r2 = 0;           // the round's hash seeds
  std::uint64_t mu = 0;          // values assigned before the round
  std::uint64_t broadcast_bits = 0;
  std::uint64_t arranged = 0;    // tags assigned this round
  std::uint64_t unarranged = 0;  // before the round
};

struct ArrangementResult {
  std::vector<std::uint64_t> chi;  // per candidate, a permutation of 1..N
  double elapsed_ms = 0.0;
  std::uint64_t reader_bits = 0;
  std::uint64_t rounds = 0;
  std::vector<ArrangementRound> trace;
};

// Stages 1-3: assigns every candidate a unique chi. Runs on stored ids only,
// so presence never matters here. A round that arranges nothing (possible but
// rare) still costs its broadcast; the next round redraws seeds.
inline ArrangementResult run_arrangement(std::span<const TagId> ids, Seed seed,
                                         double load = 1.5) {
  if (!(load > 0.0)) throw std::invalid_argument("run_arrangement: load must be > 0");
  ArrangementResult res;
  res.chi.assign(ids.size(), 0);
  std::vector<std::uint32_t> unarranged(ids.size());
  std::iota(unarranged.begin(), unarranged.end(), 0u);
  SplitMix64 seeder(derive_seed(seed, 0x55u));
  std::uint64_t mu = 0;

  while (!unarranged.empty()) {
    SsmtiParams prm;
    prm.f2 = std::max<std::uint64_t>(
        1, static_cast<std::uint64_t>(
               std::llround(static_cast<double>(unarranged.size()) / load)));
    prm.r1 = seeder.next();
    prm.r2 = seeder.next();
    prm.mu = mu;

    MainVector mv = reconcile(build_main_vector(ids, unarranged, prm), ids, prm.r2);

    // Reader-side mirror of tag_process_v2, one pass over the buckets.
    std::uint64_t singles = 0, pairs = 0;
    for (std::uint64_t b = 0; b < mv.f2; ++b) {
      const std::uint64_t base = mu + singles + 2 * pairs;
      if (mv.code[b] == kBucketSingle) {
        res.chi[mv.members[b][0]] = base + 1;
        ++singles;
      } else if (mv.code[b] == kBucketReconciled) {
        res.chi[mv.members[b][0]] = base + 1;
        res.chi[mv.members[b][1]] = base + 2;
        ++pairs;
      }
    }
    const std::uint64_t arranged = singles + 2 * pairs;
    const std::uint64_t bits = prm.f2 + singles + pairs;

    res.reader_bits += bits;
    res.elapsed_ms += static_cast<double>(bits) * kBitMs;
    ++res.rounds;
    res.trace.push_back({prm.f2, prm.r1, prm.r2, mu, bits, arranged, unarranged.size()});

    mu += arranged;
    if (arranged > 0)
      std::erase_if(unarranged, [&](std::uint32_t c) { return res.chi[c] != 0; });
    if (res.rounds > 10'000'000)
      throw std::logic_error("run_arrangement: no progress");  // unreachable
  }
  return res;
}

struct ChiPosition {
  std::uint64_t slot = 0;  // 1-based verification slot
  int bit = 0;             // 1-based bit within the slot
};

inline ChiPosition string_for_chi(std::uint64_t chi, int w) {
  if (chi < 1) throw std::invalid_argument("string_for_chi: chi must be >= 1");
  if (w < 1) throw std::invalid_argument("string_for_chi: w must be >= 1");
  const std::uint64_t uw = static_cast<std::uint64_t>(w);
  return {(chi + uw - 1) / uw, static_cast<int>((chi - 1) % uw) + 1};
}

struct VerifyResult {
  std::vector<std::uint8_t> declared_present;  // per candidate
  double elapsed_ms = 0.0;
  std::uint64_t slots = 0;
  std::vector<std::string> received;  // decoded string per slot, {0,1,X,-}
};

// Stage 4: walks the chi space slot by slot; present tags answer one-hot at
// their position, and each bit's symbol decides its tag's fate.
inline VerifyResult verify_stage(std::span<const TagId> ids,
                                 std::span<const std::uint64_t> chi,
                                 std::span<const std::uint8_t> present, int w,
                                 const ChannelConfig& channel) {
  const std::size_t n = ids.size();
  if (chi.size() != n || present.size() != n)
    throw std::invalid_argument("verify_stage: span sizes differ");
  if (w < 1 || w > 96) throw std::invalid_argument("verify_stage: w outside [1, 96]");

  std::vector<std::uint32_t> tag_of_chi(n, 0xFFFFFFFFu);
  for (std::size_t c = 0; c < n; ++c) {
    if (chi[c] < 1 || chi[c] > n || tag_of_chi[chi[c] - 1] != 0xFFFFFFFFu)
      throw std::invalid_argument("verify_stage: chi is not a permutation of 1..N");
    tag_of_chi[chi[c] - 1] = static_cast<std::uint32_t>(c);
  }

  VerifyResult res;
  res.declared_present.assign(n, 0);
  const std::uint64_t uw = static_cast<std::uint64_t>(w);
  res.slots = (n + uw - 1) / uw;
  res.received.reserve(res.slots);

  std::vector<TagString> strings;
  for (std::uint64_t s = 0; s < res.slots; ++s) {
    const std::uint64_t lo = s * uw;  // 0-based chi range [lo, hi)
    const std::uint64_t hi = std::min<std::uint64_t>(lo + uw, n);
    strings.clear();
    for (std::uint64_t v = lo; v < hi; ++v) {
      const std::uint32_t c = tag_of_chi[v];
      if (present[c]) strings.push_back(make_one_hot(ids[c], w, static_cast<int>(v - lo) + 1));
    }
    const ReceivedString rec =
        transmit_slot(std::span<const TagString>(strings.data(), strings.size()), w, channel, s);
    for (std::uint64_t v = lo; v < hi; ++v)
      res.declared_present[tag_of_chi[v]] =
          verdict(rec[static_cast<std::size_t>(v - lo)]) == Verdict::Present;
    res.received.push_back(to_string(rec));
  }
  res.elapsed_ms = static_cast<double>(res.slots) * string_time_ms(w);
  return res;
}

struct SsmtiOptions {
  int w = 96;
  double load = 1.5;  // arrangement load factor N*/f2
};

struct SsmtiTrace {
  std::vector<ArrangementRound> rounds;
  std::vector<std::string> received;
};

inline IdentificationResult run_ssmti(const Inventory& inv, const SsmtiOptions& opt,
                                      const ChannelConfig& channel, Seed run_seed,
                                      SsmtiTrace* trace = nullptr) {
  if (opt.w < 1 || opt.w > 96) throw std::invalid_argument("run_ssmti: w outside [1, 96]");

  IdentificationResult res;
  if (inv.n() == 0) return res;

  const ArrangementResult arr = run_arrangement(inv.tags, derive_seed(run_seed, 1), opt.load);
  const VerifyResult ver = verify_stage(inv.tags, arr.chi, inv.present, opt.w, channel);

  res.elapsed_ms = arr.elapsed_ms + ver.elapsed_ms;
  res.reader_bits = arr.reader_bits;
  // Verification allots one bit per candidate across full w-bit slots.
  res.tag_bits = static_cast<std::uint64_t>(inv.n()) * static_cast<std::uint64_t>(opt.w);
  res.slots_used = ver.slots;
  res.rounds = arr.rounds;
  for (std::size_t c = 0; c < inv.n(); ++c) {
    if (ver.declared_present[c]) {
      res.identified_present.push_back(inv.tags[c]);
      res.false_negatives += !inv.present[c];
    } else {
      res.identified_missing.push_back(inv.tags[c]);
      res.false_positives += inv.present[c];
    }
  }
  if (trace) {
    trace->rounds = arr.trace;
    trace->received = ver.received;
  }
  return res;
}

}  // namespace mti
