#pragma once

// Common outcome record for a full protocol run.

#include <cstdint>
#include <vector>

#include "mti/tag.hpp"

namespace mti {

struct IdentificationResult {
  std::vector<TagId> identified_missing;   // declared missing, candidate order
  std::vector<TagId> identified_present;   // declared present, candidate order
  double elapsed_ms = 0.0;
  std::uint64_t reader_bits = 0;           // broadcast vector bits
  std::uint64_t tag_bits = 0;              // bits transmitted by tags
  std::uint64_t slots_used = 0;            // tag response slots
  std::uint64_t rounds = 0;
  // Against ground truth: a false positive is a present tag declared missing,
  // a false negative a missing tag declared present (or never declared).
  std::uint64_t false_positives = 0;
  std::uint64_t false_negatives = 0;
};

}  // namespace mti
