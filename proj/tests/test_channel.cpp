#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <vector>

#include "mti/channel.hpp"
#include "mti/rng.hpp"
#include "support/fixtures.hpp"

using namespace mti;

namespace {

std::vector<TagString> one_hots(int w, const std::vector<int>& bits) {
  std::vector<TagString> out;
  for (std::size_t i = 0; i < bits.size(); ++i)
    out.push_back(make_one_hot(testsupport::scan_id(i), w, bits[i]));
  return out;
}

}  // namespace

TEST_CASE("superpose of nothing is silence") {
  REQUIRE(to_string(superpose({}, 6)) == "------");
}

TEST_CASE("superpose of a single one-hot string reads it back") {
  const auto strings = one_hots(6, {3});
  REQUIRE(to_string(superpose(strings, 6)) == "001000");
}

TEST_CASE("superpose: same bit twice gives One, distinct bits collide") {
  REQUIRE(to_string(superpose(one_hots(4, {2, 2}), 4)) == "0100");
  REQUIRE(to_string(superpose(one_hots(4, {1, 2}), 4)) == "XX00");
  REQUIRE(to_string(superpose(one_hots(4, {1, 2, 2}), 4)) == "XX00");
}

TEST_CASE("superpose is order-independent") {
  SplitMix64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const int w = 1 + static_cast<int>(rng.next_below(8));
    std::vector<TagString> strings;
    const int k = static_cast<int>(rng.next_below(6));
    for (int i = 0; i < k; ++i) {
      TagString s{testsupport::scan_id(static_cast<std::uint64_t>(i)),
                  std::vector<std::uint8_t>(static_cast<std::size_t>(w))};
      for (auto& b : s.bits) b = rng.next_below(2) != 0;
      strings.push_back(std::move(s));
    }
    const ReceivedString forward = superpose(strings, w);
    std::reverse(strings.begin(), strings.end());
    REQUIRE(superpose(strings, w) == forward);
  }
}

TEST_CASE("superpose rejects length mismatches and bad w") {
  auto strings = one_hots(4, {1});
  REQUIRE_THROWS_AS(superpose(strings, 5), std::invalid_argument);
  REQUIRE_THROWS_AS(superpose(strings, 0), std::invalid_argument);
  REQUIRE_THROWS_AS(make_one_hot(testsupport::scan_id(0), 4, 5), std::invalid_argument);
  REQUIRE_THROWS_AS(make_one_hot(testsupport::scan_id(0), 4, 0), std::invalid_argument);
}

TEST_CASE("verdict: One and Collision mean present") {
  REQUIRE(verdict(BitSymbol::One) == Verdict::Present);
  REQUIRE(verdict(BitSymbol::Collision) == Verdict::Present);
  REQUIRE(verdict(BitSymbol::Zero) == Verdict::Absent);
  REQUIRE(verdict(BitSymbol::Silence) == Verdict::Absent);
}

TEST_CASE("received string text round trip") {
  const std::string text = "01X-10";
  REQUIRE(to_string(parse_received(text)) == text);
  REQUIRE_THROWS_AS(parse_received("01?"), std::invalid_argument);
}

TEST_CASE("error-free transmit_slot equals superpose") {
  const ChannelConfig clean{0.0, 0.0, 1234};
  SplitMix64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const int w = 1 + static_cast<int>(rng.next_below(6));
    std::vector<int> bits;
    const int k = static_cast<int>(rng.next_below(5));
    for (int i = 0; i < k; ++i) bits.push_back(1 + static_cast<int>(rng.next_below(w)));
    const auto strings = one_hots(w, bits);
    REQUIRE(transmit_slot(strings, w, clean, static_cast<std::uint64_t>(trial)) ==
            superpose(strings, w));
  }
}

TEST_CASE("certain detection error silences everything") {
  const ChannelConfig cfg{1.0, 0.0, 5};
  const auto strings = one_hots(4, {1, 2, 3});
  REQUIRE(to_string(transmit_slot(strings, 4, cfg, 0)) == "----");
}

TEST_CASE("certain capture decodes exactly one of the strings") {
  const ChannelConfig cfg{0.0, 1.0, 9};
  const auto strings = one_hots(5, {2, 4});
  for (std::uint64_t slot = 0; slot < 20; ++slot) {
    const std::string got = to_string(transmit_slot(strings, 5, cfg, slot));
    REQUIRE((got == "01000" || got == "00010"));
  }
}

TEST_CASE("capture needs at least two survivors") {
  const ChannelConfig cfg{0.0, 1.0, 9};
  const auto strings = one_hots(3, {2});
  REQUIRE(to_string(transmit_slot(strings, 3, cfg, 0)) == "010");
}

TEST_CASE("transmit_slot is deterministic per (seed, slot)") {
  const ChannelConfig cfg{0.3, 0.5, 42};
  const auto strings = one_hots(6, {1, 2, 3, 4});
  REQUIRE(transmit_slot(strings, 6, cfg, 17) == transmit_slot(strings, 6, cfg, 17));
}

TEST_CASE("transmit_slot rejects probabilities outside [0, 1]") {
  const auto strings = one_hots(3, {1});
  REQUIRE_THROWS_AS(transmit_slot(strings, 3, ChannelConfig{-0.1, 0.0, 0}, 0),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(transmit_slot(strings, 3, ChannelConfig{0.0, 1.5, 0}, 0),
                    std::invalid_argument);
}

TEST_CASE("detection errors drop tags at about the configured rate") {
  const ChannelConfig cfg{0.25, 0.0, 99};
  int dropped = 0;
  constexpr int kTrials = 4000;
  for (int t = 0; t < kTrials; ++t) {
    const auto strings = one_hots(2, {1});
    const ReceivedString rec = transmit_slot(strings, 2, cfg, static_cast<std::uint64_t>(t));
    dropped += (rec[0] == BitSymbol::Silence);
  }
  const double frac = static_cast<double>(dropped) / kTrials;
  REQUIRE(frac > 0.20);
  REQUIRE(frac < 0.30);
}
