#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <set>
#include <vector>

#include "mti/rng.hpp"
#include "mti/tag.hpp"
#include "support/fixtures.hpp"

using namespace mti;

TEST_CASE("splitmix stream is deterministic and well spread") {
  SplitMix64 a(42), b(42);
  for (int i = 0; i < 100; ++i) REQUIRE(a.next() == b.next());

  SplitMix64 c(42), d(43);
  int equal = 0;
  for (int i = 0; i < 100; ++i) equal += (c.next() == d.next());
  REQUIRE(equal == 0);
}

TEST_CASE("derive_seed separates streams") {
  std::set<Seed> seen;
  for (std::uint64_t s = 0; s < 100; ++s) seen.insert(derive_seed(7, s));
  REQUIRE(seen.size() == 100);
  REQUIRE(derive_seed(7, 3) == derive_seed(7, 3));
  REQUIRE(derive_seed(7, 3) != derive_seed(8, 3));
}

TEST_CASE("next_below stays in range and hits every value") {
  SplitMix64 rng(1);
  std::vector<int> hits(10, 0);
  for (int i = 0; i < 5000; ++i) {
    const std::uint64_t v = rng.next_below(10);
    REQUIRE(v < 10);
    ++hits[v];
  }
  for (int h : hits) REQUIRE(h > 0);
}

TEST_CASE("next_double lies in [0, 1)") {
  SplitMix64 rng(9);
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.next_double();
    REQUIRE(x >= 0.0);
    REQUIRE(x < 1.0);
  }
}

TEST_CASE("shuffle permutes") {
  std::vector<int> v(50);
  std::iota(v.begin(), v.end(), 0);
  const std::vector<int> orig = v;
  SplitMix64 rng(5);
  shuffle(v, rng);
  REQUIRE(v != orig);  // 50! makes a fixed-point astronomically unlikely
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  REQUIRE(sorted == orig);
}

TEST_CASE("hash96 depends on id and seed") {
  const TagId id1 = testsupport::scan_id(1);
  const TagId id2 = testsupport::scan_id(2);
  REQUIRE(hash96(id1, 10) == hash96(id1, 10));
  REQUIRE(hash96(id1, 10) != hash96(id1, 11));
  REQUIRE(hash96(id1, 10) != hash96(id2, 10));
}

TEST_CASE("hash_slot stays in [1, f]; f = 1 pins everything to slot 1") {
  for (std::uint64_t k = 0; k < 200; ++k) {
    const TagId id = testsupport::scan_id(k);
    REQUIRE(hash_slot(id, 3, 1) == 1);
    const std::uint64_t s = hash_slot(id, 3, 17);
    REQUIRE(s >= 1);
    REQUIRE(s <= 17);
  }
  REQUIRE_THROWS_AS(hash_slot(testsupport::scan_id(0), 3, 0), std::invalid_argument);
}

TEST_CASE("hash_slot is uniform (chi-square, alpha = 0.001)") {
  // 100,000 draws over 100 buckets. Critical value for df = 99 at
  // significance 0.001 is 148.2304 (computed externally).
  constexpr std::uint64_t kBuckets = 100;
  constexpr std::uint64_t kDraws = 100'000;
  std::vector<std::uint64_t> count(kBuckets, 0);
  for (std::uint64_t k = 0; k < kDraws; ++k)
    ++count[hash_slot(testsupport::scan_id(k), 0xABCDEF, kBuckets) - 1];
  const double expected = static_cast<double>(kDraws) / kBuckets;
  double chi2 = 0.0;
  for (std::uint64_t b = 0; b < kBuckets; ++b) {
    const double d = static_cast<double>(count[b]) - expected;
    chi2 += d * d / expected;
  }
  REQUIRE(chi2 < 148.2304);
}

TEST_CASE("hash_binary is balanced") {
  int ones = 0;
  constexpr int kDraws = 10'000;
  for (int k = 0; k < kDraws; ++k) ones += hash_binary(testsupport::scan_id(k), 0x1234);
  const double frac = static_cast<double>(ones) / kDraws;
  REQUIRE(frac > 0.48);
  REQUIRE(frac < 0.52);
}

TEST_CASE("tag id hex round trip") {
  const TagId id{0x89ABCDEFull, 0x0123456789ABCDEFull};
  const std::string hex = to_hex(id);
  REQUIRE(hex.size() == 24);
  REQUIRE(hex == "89abcdef0123456789abcdef");
  REQUIRE(parse_tag_id(hex) == id);

  for (std::uint64_t k = 0; k < 50; ++k) {
    const TagId t = testsupport::scan_id(k);
    REQUIRE(parse_tag_id(to_hex(t)) == t);
  }
}

TEST_CASE("tag id parse errors") {
  REQUIRE_THROWS_AS(parse_tag_id("abc"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_tag_id("zz3456789012345678901234"), std::invalid_argument);
  REQUIRE_NOTHROW(parse_tag_id("AB3456789012345678901234"));  // uppercase ok
}
