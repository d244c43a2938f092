#pragma once

// The reader's candidate list plus ground-truth presence flags.
//
// Text format, one tag per line: "<24-hex-id> <flag>" where flag is 1 for a
// tag physically present in the field and 0 for one that has gone missing.

#include <cmath>
#include <cstdint>
#include <istream>
#include <numeric>
#include <utility>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mti/rng.hpp"
#include "mti/tag.hpp"

namespace mti {

struct Inventory {
  std::vector<TagId> tags;             // candidate ids, reader database order
  std::vector<std::uint8_t> present;   // 1 = in field, 0 = missing

  std::size_t n() const { return tags.size(); }

  std::size_t present_count() const {
    return static_cast<std::size_t>(
        std::accumulate(present.begin(), present.end(), std::uint64_t{0}));
  }

  std::size_t missing_count() const { return n() - present_count(); }

  double missing_rate() const {
    return n() == 0 ? 0.0 : static_cast<double>(missing_count()) / static_cast<double>(n());
  }
};

// Builds n distinct ids and marks round(n * missing_rate) of them, chosen
// uniformly, as missing.
inline Inventory make_inventory(std::size_t n, double missing_rate, Seed seed) {
  if (missing_rate < 0.0 || missing_rate > 1.0)
    throw std::invalid_argument("make_inventory: missing_rate outside [0, 1]");

  Inventory inv;
  inv.tags.resize(n);
  inv.present.assign(n, 1);

  // id.lo walks a splitmix sequence (a bijection of the counter, so ids are
  // distinct); id.hi is a 32-bit mix of lo.
  const Seed base = derive_seed(seed, 0x1D5u);
  for (std::size_t k = 0; k < n; ++k) {
    const std::uint64_t lo = mix64(base + (static_cast<std::uint64_t>(k) + 1) * kGoldenGamma);
    inv.tags[k] = TagId{mix64(lo ^ 0xA5A5A5A5A5A5A5A5ull) & 0xFFFFFFFFull, lo};
  }

  const auto missing = static_cast<std::size_t>(
      std::llround(static_cast<double>(n) * missing_rate));
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  SplitMix64 rng(derive_seed(seed, 0x3E7u));
  for (std::size_t i = 0; i < missing; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.next_below(n - i));
    std::swap(order[i], order[j]);
    inv.present[order[i]] = 0;
  }
  return inv;
}

inline void save_inventory(std::ostream& os, const Inventory& inv) {
  for (std::size_t i = 0; i < inv.n(); ++i)
    os << to_hex(inv.tags[i]) << ' ' << (inv.present[i] ? '1' : '0') << '\n';
}

inline Inventory load_inventory(std::istream& is) {
  Inventory inv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string hex, flag;
    if (!(fields >> hex >> flag) || (flag != "0" && flag != "1"))
      throw std::runtime_error("inventory line " + std::to_string(lineno) +
                               ": expected \"<24-hex-id> <0|1>\"");
    try {
      inv.tags.push_back(parse_tag_id(hex));
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error("inventory line " + std::to_string(lineno) + ": " + e.what());
    }
    inv.present.push_back(flag == "1" ? 1 : 0);
  }
  return inv;
}

}  // namespace mti
