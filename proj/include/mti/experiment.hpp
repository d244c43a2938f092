#pragma once

// Experiment harness: repeated-trial runs over parameter grids, aggregated
// into CSV rows (one per parameter cell).
//
// Determinism: every trial's seed is derived from the master seed by counter
// (cell index, then trial index), so results do not depend on execution
// order and identical configs reproduce byte-identical CSV.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mti/edfsa.hpp"
#include "mti/inventory.hpp"
#include "mti/ismti.hpp"
#include "mti/result.hpp"
#include "mti/rng.hpp"
#include "mti/ssmti.hpp"

namespace mti {

struct ExperimentCell {
  std::string protocol = "ssmti";  // ssmti | ismti | edfsa
  std::uint64_t n = 10000;
  double missing_rate = 0.1;
  int w = 96;
  std::optional<double> p_override;  // fixed load factor; empty = protocol default
  double detection_error_prob = 0.0;
  double capture_prob = 0.0;
  int trials = 500;
  Seed master_seed = 1;
  RatePolicy rate_policy = RatePolicy::GivenRate;  // ismti only
  double q_prior = 0.5;                            // ismti only
};

struct TrialReport {
  ExperimentCell cell;
  double mean_ms = 0.0, std_ms = 0.0;
  double mean_reader_bits = 0.0, mean_tag_bits = 0.0, mean_slots = 0.0;
  double mean_rounds = 0.0;
  double accuracy = 1.0;                 // mean of 1 - (fp+fn)/n
  double misidentification_rate = 0.0;   // mean of (fp+fn)/n
};

inline IdentificationResult run_protocol_trial(const ExperimentCell& cell, Seed trial_seed) {
  const Inventory inv =
      make_inventory(cell.n, cell.missing_rate, derive_seed(trial_seed, 1));
  const ChannelConfig channel{cell.detection_error_prob, cell.capture_prob,
                              derive_seed(trial_seed, 2)};
  const Seed run_seed = derive_seed(trial_seed, 3);

  if (cell.protocol == "ssmti") {
    SsmtiOptions opt;
    opt.w = cell.w;
    if (cell.p_override) opt.load = *cell.p_override;
    return run_ssmti(inv, opt, channel, run_seed);
  }
  if (cell.protocol == "ismti") {
    IsmtiOptions opt;
    opt.w = cell.w;
    opt.policy = cell.rate_policy;
    opt.q_prior = cell.q_prior;
    opt.p_override = cell.p_override;
    return run_ismti(inv, opt, channel, run_seed);
  }
  if (cell.protocol == "edfsa") return run_edfsa(inv, run_seed);
  throw std::invalid_argument("unknown protocol: " + cell.protocol);
}

inline TrialReport run_experiment(const ExperimentCell& cell) {
  if (cell.trials < 1) throw std::invalid_argument("run_experiment: trials must be >= 1");
  if (cell.n < 1) throw std::invalid_argument("run_experiment: n must be >= 1");

  TrialReport rep;
  rep.cell = cell;
  double sum_ms = 0.0, sumsq_ms = 0.0;
  for (int t = 0; t < cell.trials; ++t) {
    const IdentificationResult r = run_protocol_trial(cell, derive_seed(cell.master_seed, t));
    sum_ms += r.elapsed_ms;
    sumsq_ms += r.elapsed_ms * r.elapsed_ms;
    rep.mean_reader_bits += static_cast<double>(r.reader_bits);
    rep.mean_tag_bits += static_cast<double>(r.tag_bits);
    rep.mean_slots += static_cast<double>(r.slots_used);
    rep.mean_rounds += static_cast<double>(r.rounds);
    rep.misidentification_rate +=
        static_cast<double>(r.false_positives + r.false_negatives) /
        static_cast<double>(cell.n);
  }
  const double k = cell.trials;
  rep.mean_ms = sum_ms / k;
  rep.std_ms = cell.trials > 1
                   ? std::sqrt(std::max(0.0, (sumsq_ms - sum_ms * sum_ms / k) / (k - 1)))
                   : 0.0;
  rep.mean_reader_bits /= k;
  rep.mean_tag_bits /= k;
  rep.mean_slots /= k;
  rep.mean_rounds /= k;
  rep.misidentification_rate /= k;
  rep.accuracy = 1.0 - rep.misidentification_rate;
  return rep;
}

struct SweepConfig {
  std::string protocol = "ssmti";
  std::vector<std::uint64_t> n = {10000};
  std::vector<double> missing_rate = {0.1};
  std::vector<int> w = {96};
  std::vector<double> p_override;  // empty = protocol default load
  double detection_error_prob = 0.0;
  double capture_prob = 0.0;
  int trials = 500;
  Seed master_seed = 1;
  RatePolicy rate_policy = RatePolicy::GivenRate;
  double q_prior = 0.5;
};

// Cartesian product of the ranged axes, one cell per combination. Cell order
// (and therefore seed assignment) is n-major, then missing_rate, w, p.
inline std::vector<ExperimentCell> expand(const SweepConfig& cfg) {
  if (cfg.n.empty() || cfg.missing_rate.empty() || cfg.w.empty())
    throw std::invalid_argument("expand: empty parameter axis");
  std::vector<ExperimentCell> cells;
  std::uint64_t index = 0;
  const std::size_t p_count = cfg.p_override.empty() ? 1 : cfg.p_override.size();
  for (std::uint64_t n : cfg.n)
    for (double q : cfg.missing_rate)
      for (int w : cfg.w)
        for (std::size_t pi = 0; pi < p_count; ++pi) {
          ExperimentCell cell;
          cell.protocol = cfg.protocol;
          cell.n = n;
          cell.missing_rate = q;
          cell.w = w;
          if (!cfg.p_override.empty()) cell.p_override = cfg.p_override[pi];
          cell.detection_error_prob = cfg.detection_error_prob;
          cell.capture_prob = cfg.capture_prob;
          cell.trials = cfg.trials;
          cell.master_seed = derive_seed(cfg.master_seed, index++);
          cell.rate_policy = cfg.rate_policy;
          cell.q_prior = cfg.q_prior;
          cells.push_back(cell);
        }
  return cells;
}

inline std::vector<TrialReport> sweep(const SweepConfig& cfg) {
  std::vector<TrialReport> rows;
  for (const ExperimentCell& cell : expand(cfg)) rows.push_back(run_experiment(cell));
  return rows;
}

// CSV output. The p column is the fixed override when one was set, empty when
// the protocol chose its own load.
inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline constexpr const char* kCsvHeader =
    "protocol,n,q,w,p,detect_err,capture,trials,mean_ms,std_ms,"
    "mean_reader_bits,mean_tag_bits,mean_slots,accuracy";

inline void write_csv_header(std::ostream& os) { os << kCsvHeader << '\n'; }

inline void write_csv_row(std::ostream& os, const TrialReport& rep) {
  const ExperimentCell& c = rep.cell;
  os << c.protocol << ',' << c.n << ',' << format_number(c.missing_rate) << ',' << c.w
     << ',' << (c.p_override ? format_number(*c.p_override) : std::string()) << ','
     << format_number(c.detection_error_prob) << ',' << format_number(c.capture_prob)
     << ',' << c.trials << ',' << format_number(rep.mean_ms) << ','
     << format_number(rep.std_ms) << ',' << format_number(rep.mean_reader_bits) << ','
     << format_number(rep.mean_tag_bits) << ',' << format_number(rep.mean_slots) << ','
     << format_number(rep.accuracy) << '\n';
}

}  // namespace mti
