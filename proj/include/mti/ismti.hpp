#pragma once

// ISMTI: interactive string-based missing tag identification.
//
// Each round hashes the unresolved candidates onto an f3-bit expected vector
// EV (0 / 1 / >=2 tags per bit, computed from stored ids), listens to
// ceil(f3/w) response slots in which present unresolved tags answer one-hot
// at their bit (actual vector AV, 1 iff One or Collision), and resolves:
//   EV>=1, AV=0  -> every tag mapped there is missing (nobody answered);
//   EV=1,  AV=1  -> the single expected tag is present;
//   EV>=2, AV=1  -> can't tell which answered, carry all of them over.
// The broadcast indicator V3 (one bit per EV bit) silences resolved tags:
// bit 1 = resolved (or unused), bit 0 = try again next round.
//
// Frame sizing uses the analysis module's optimal load p_opt(q) where q is
// the unresolved missing rate. The rate is either given per round (the
// protocol-comparison configuration) or estimated online from EV-singleton
// bits: N1 of them exist, N11 answered, so M*^ = N*(1 - N11/N1).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mti/analysis.hpp"
#include "mti/channel.hpp"
#include "mti/inventory.hpp"
#include "mti/result.hpp"
#include "mti/rng.hpp"
#include "mti/tag.hpp"
#include "mti/timing.hpp"

namespace mti {

struct IsmtiParams {
  std::uint64_t f3 = 1;  // expected/actual vector length in bits
  Seed r = 0;            // bit-mapping hash seed
  int w = 96;            // string (slot) length
};

struct TagMapping {
  std::uint64_t global = 0;  // 1-based bit index in [1, f3]
  std::uint64_t slot = 0;    // 1-based response slot
  int bit = 0;               // 1-based bit within the slot
};

inline TagMapping tag_map(const TagId& id, const IsmtiParams& params) {
  if (params.w < 1) throw std::invalid_argument("tag_map: w must be >= 1");
  const std::uint64_t g = hash_slot(id, params.r, params.f3);
  const std::uint64_t uw = static_cast<std::uint64_t>(params.w);
  return {g, (g + uw - 1) / uw, static_cast<int>((g - 1) % uw) + 1};
}

struct ExpectedVector {
  std::uint64_t f3 = 0;
  std::vector<std::uint8_t> code;                   // 0 / 1 / 2 (2 means >= 2)
  std::vector<std::vector<std::uint32_t>> members;  // candidate indices per bit
};

inline ExpectedVector build_expected_vector(std::span<const TagId> ids,
                                            std::span<const std::uint32_t> unresolved,
                                            const IsmtiParams& params) {
  if (params.f3 < 1) throw std::invalid_argument("build_expected_vector: f3 must be >= 1");
  ExpectedVector ev;
  ev.f3 = params.f3;
  ev.code.assign(params.f3, 0);
  ev.members.assign(params.f3, {});
  for (std::uint32_t c : unresolved)
    ev.members[hash_slot(ids[c], params.r, params.f3) - 1].push_back(c);
  for (std::uint64_t b = 0; b < params.f3; ++b) {
    const std::size_t k = ev.members[b].size();
    ev.code[b] = k >= 2 ? 2 : static_cast<std::uint8_t>(k);
  }
  return ev;
}

// Runs the round's response slots and records which bits sounded occupied.
// slot_base offsets the channel's slot indices so every slot of a run is
// decoded independently.
inline std::vector<std::uint8_t> collect_actual_vector(std::span<const TagId> ids,
                                                       std::span<const std::uint32_t> transmitters,
                                                       const IsmtiParams& params,
                                                       const ChannelConfig& channel,
                                                       std::uint64_t slot_base = 0) {
  if (params.f3 < 1) throw std::invalid_argument("collect_actual_vector: f3 must be >= 1");
  if (params.w < 1 || params.w > 96)
    throw std::invalid_argument("collect_actual_vector: w outside [1, 96]");

  const std::uint64_t uw = static_cast<std::uint64_t>(params.w);
  const std::uint64_t slots = (params.f3 + uw - 1) / uw;
  std::vector<std::vector<TagString>> per_slot(slots);
  for (std::uint32_t c : transmitters) {
    const TagMapping m = tag_map(ids[c], params);
    per_slot[m.slot - 1].push_back(make_one_hot(ids[c], params.w, m.bit));
  }

  std::vector<std::uint8_t> av(params.f3, 0);
  for (std::uint64_t s = 0; s < slots; ++s) {
    const auto& strings = per_slot[s];
    const ReceivedString rec = transmit_slot(
        std::span<const TagString>(strings.data(), strings.size()), params.w, channel,
        slot_base + s);
    const std::uint64_t lo = s * uw;  // 0-based global bit range [lo, hi)
    const std::uint64_t hi = std::min<std::uint64_t>(lo + uw, params.f3);
    for (std::uint64_t g = lo; g < hi; ++g)
      av[g] = verdict(rec[static_cast<std::size_t>(g - lo)]) == Verdict::Present;
  }
  return av;
}

inline std::vector<std::uint8_t> build_indicator_v3(const ExpectedVector& ev,
                                                    std::span<const std::uint8_t> av) {
  if (av.size() != ev.f3) throw std::logic_error("build_indicator_v3: EV/AV length mismatch");
  std::vector<std::uint8_t> v3(ev.f3, 0);
  for (std::uint64_t b = 0; b < ev.f3; ++b) {
    if (ev.code[b] == 0) v3[b] = 0;                 // nobody expected, unused bit
    else if (!av[b]) v3[b] = 1;                     // all expected tags missing
    else v3[b] = ev.code[b] == 1 ? 1 : 0;           // resolved present / carryover
  }
  return v3;
}

struct RoundOutcome {
  std::vector<std::uint32_t> declared_missing;
  std::vector<std::uint32_t> declared_present;
  std::vector<std::uint32_t> carryover;
};

// Ground-truth-free resolution from (EV, AV) alone.
inline RoundOutcome resolve_round(const ExpectedVector& ev, std::span<const std::uint8_t> av) {
  if (av.size() != ev.f3) throw std::logic_error("resolve_round: EV/AV length mismatch");
  RoundOutcome out;
  for (std::uint64_t b = 0; b < ev.f3; ++b) {
    if (ev.code[b] == 0) continue;
    auto& dest = !av[b] ? out.declared_missing
                        : (ev.code[b] == 1 ? out.declared_present : out.carryover);
    dest.insert(dest.end(), ev.members[b].begin(), ev.members[b].end());
  }
  return out;
}

struct MissingRateEstimate {
  std::uint64_t n1 = 0;   // EV-singleton bits
  std::uint64_t n11 = 0;  // EV-singleton bits that answered
  double m_hat = 0.0;     // estimated unresolved missing count
  double q_hat = 0.0;     // m_hat / n_star
};

// Cardinality estimate from singleton response rates. With no singleton bits
// to observe, falls back to the caller's prior.
inline MissingRateEstimate estimate_missing(std::uint64_t n_star, std::uint64_t n1,
                                            std::uint64_t n11, double prior_q = 0.5) {
  if (n_star < 1) throw std::invalid_argument("estimate_missing: n_star must be >= 1");
  if (n11 > n1) throw std::invalid_argument("estimate_missing: n11 exceeds n1");
  MissingRateEstimate est;
  est.n1 = n1;
  est.n11 = n11;
  if (n1 == 0) {
    est.q_hat = std::min(std::max(prior_q, 0.0), 1.0);
    est.m_hat = est.q_hat * static_cast<double>(n_star);
    return est;
  }
  const double m = static_cast<double>(n_star) *
                   (1.0 - static_cast<double>(n11) / static_cast<double>(n1));
  est.m_hat = std::min(std::max(m, 0.0), static_cast<double>(n_star));
  est.q_hat = est.m_hat / static_cast<double>(n_star);
  return est;
}

// How the per-round missing rate that sizes f3 is obtained.
enum class RatePolicy {
  GivenRate,     // true unresolved missing rate each round
  EstimateRate,  // prior, then online estimate_missing updates
};

struct IsmtiOptions {
  int w = 96;
  RatePolicy policy = RatePolicy::GivenRate;
  double q_prior = 0.5;              // initial estimate (EstimateRate)
  std::optional<double> p_override;  // fixed load factor instead of p_opt(q)
};

struct IsmtiRound {
  std::uint64_t f3 = 0;
  double q_used = 0.0;  // rate that sized this round's f3
  double p = 0.0;
  std::uint64_t n1 = 0, n11 = 0;
  double q_hat_next = 0.0;  // estimator state going into the next round
  std::uint64_t new_missing = 0, new_present = 0, carryover = 0;
};

struct IsmtiTrace {
  std::vector<IsmtiRound> rounds;
};

inline IdentificationResult run_ismti(const Inventory& inv, const IsmtiOptions& opt,
                                      const ChannelConfig& channel, Seed run_seed,
                                      IsmtiTrace* trace = nullptr) {
  if (opt.w < 1 || opt.w > 96) throw std::invalid_argument("run_ismti: w outside [1, 96]");
  if (opt.q_prior < 0.0 || opt.q_prior > 1.0)
    throw std::invalid_argument("run_ismti: q_prior outside [0, 1]");
  if (opt.p_override && !(*opt.p_override > 0.0))
    throw std::invalid_argument("run_ismti: p_override must be > 0");

  IdentificationResult res;
  std::vector<std::uint8_t> declared_missing(inv.n(), 0), declared_present(inv.n(), 0);
  std::vector<std::uint32_t> unresolved(inv.n());
  std::iota(unresolved.begin(), unresolved.end(), 0u);

  SplitMix64 seeder(derive_seed(run_seed, 0x77u));
  const std::uint64_t uw = static_cast<std::uint64_t>(opt.w);
  double q_hat = opt.q_prior;
  std::uint64_t slot_base = 0;

  while (!unresolved.empty()) {
    const std::uint64_t n_star = unresolved.size();

    double q_used = q_hat;
    if (opt.policy == RatePolicy::GivenRate) {
      std::uint64_t missing = 0;
      for (std::uint32_t c : unresolved) missing += !inv.present[c];
      q_used = static_cast<double>(missing) / static_cast<double>(n_star);
    }

    double p = opt.p_override ? *opt.p_override : ismti_p_opt(q_used);
    // Online estimation needs singleton bits to observe; cap the load so the
    // expected singleton count stays around 8 or more even if q_hat overshot.
    if (opt.policy == RatePolicy::EstimateRate && !opt.p_override)
      p = std::min(p, std::max(1.0, std::log(static_cast<double>(n_star) / 8.0)));

    IsmtiParams prm;
    std::uint64_t f3 = std::max<std::uint64_t>(
        1, static_cast<std::uint64_t>(std::llround(static_cast<double>(n_star) / p)));
    prm.f3 = std::max<std::uint64_t>(uw, (f3 + uw - 1) / uw * uw);
    prm.r = seeder.next();
    prm.w = opt.w;

    const ExpectedVector ev = build_expected_vector(inv.tags, unresolved, prm);
    std::vector<std::uint32_t> transmitters;
    transmitters.reserve(n_star);
    for (std::uint32_t c : unresolved)
      if (inv.present[c]) transmitters.push_back(c);
    const std::vector<std::uint8_t> av =
        collect_actual_vector(inv.tags, transmitters, prm, channel, slot_base);
    RoundOutcome out = resolve_round(ev, av);

    std::uint64_t n1 = 0, n11 = 0;
    for (std::uint64_t b = 0; b < prm.f3; ++b) {
      n1 += (ev.code[b] == 1);
      n11 += (ev.code[b] == 1 && av[b]);
    }
    const MissingRateEstimate est = estimate_missing(n_star, n1, n11, q_hat);
    // Prior for the next round: this round's estimate minus the missing tags
    // just declared, spread over the carryover set.
    if (!out.carryover.empty()) {
      const double remaining =
          est.m_hat - static_cast<double>(out.declared_missing.size());
      q_hat = std::min(std::max(remaining / static_cast<double>(out.carryover.size()), 0.0),
                       0.98);
    }

    const std::uint64_t slots = prm.f3 / uw;
    res.elapsed_ms += static_cast<double>(slots) * string_time_ms(opt.w) +
                      vector_broadcast_time_ms(prm.f3);
    res.reader_bits += prm.f3;
    res.tag_bits += static_cast<std::uint64_t>(transmitters.size()) * uw;
    res.slots_used += slots;
    ++res.rounds;
    slot_base += slots;

    for (std::uint32_t c : out.declared_missing) declared_missing[c] = 1;
    for (std::uint32_t c : out.declared_present) declared_present[c] = 1;
    if (trace)
      trace->rounds.push_back({prm.f3, q_used, p, n1, n11, q_hat,
                               out.declared_missing.size(), out.declared_present.size(),
                               out.carryover.size()});

    unresolved = std::move(out.carryover);
    if (res.rounds > 10'000'000)
      throw std::logic_error("run_ismti: no progress");  // unreachable
  }

  for (std::size_t c = 0; c < inv.n(); ++c) {
    if (declared_missing[c]) {
      res.identified_missing.push_back(inv.tags[c]);
      res.false_positives += inv.present[c];
    } else {
      res.identified_present.push_back(inv.tags[c]);
      res.false_negatives += !inv.present[c];
    }
  }
  return res;
}

}  // namespace mti
