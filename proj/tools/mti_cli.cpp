// mti: command-line front end for the missing-tag identification simulator.
//
// Subcommands:
//   run      one parameter cell, aggregated over trials, as a CSV row
//   sweep    cartesian product of parameter axes, one CSV row per cell
//   optimize load-factor optima and efficiency curves
//   trace    single-trial round-by-round log
//
// Exit codes: 0 success, 2 invalid configuration, 3 I/O or internal failure.
// CLI11 handles --help/--version and flag parse errors itself.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mti/mti.hpp"

namespace {

using namespace mti;

// Axis syntax: comma-separated pieces, each a scalar or an inclusive
// start:stop:step range, e.g. "1000,5000" or "0.1:0.9:0.2".
std::vector<double> parse_axis(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    if (piece.empty()) throw std::invalid_argument("empty element in axis '" + text + "'");
    const std::size_t c1 = piece.find(':');
    if (c1 == std::string::npos) {
      out.push_back(std::stod(piece));
      continue;
    }
    const std::size_t c2 = piece.find(':', c1 + 1);
    if (c2 == std::string::npos)
      throw std::invalid_argument("range must be start:stop:step: '" + piece + "'");
    const double start = std::stod(piece.substr(0, c1));
    const double stop = std::stod(piece.substr(c1 + 1, c2 - c1 - 1));
    const double step = std::stod(piece.substr(c2 + 1));
    if (!(step > 0.0))
      throw std::invalid_argument("range step must be > 0: '" + piece + "'");
    for (double v = start; v <= stop + 1e-9 * std::max(1.0, std::abs(stop)); v += step)
      out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty axis: '" + text + "'");
  return out;
}

std::vector<std::uint64_t> parse_axis_u64(const std::string& text, std::uint64_t lo,
                                          std::uint64_t hi, const char* what) {
  std::vector<std::uint64_t> out;
  for (double v : parse_axis(text)) {
    if (v != std::floor(v) || v < static_cast<double>(lo) || v > static_cast<double>(hi))
      throw std::invalid_argument(std::string(what) + " axis element out of range: " +
                                  format_number(v));
    out.push_back(static_cast<std::uint64_t>(v));
  }
  return out;
}

RatePolicy policy_of(const std::string& name) {
  return name == "estimate" ? RatePolicy::EstimateRate : RatePolicy::GivenRate;
}

// One cell's worth of flags, shared by run and trace.
struct CellOptions {
  ExperimentCell cell;
  std::string rate_policy = "given";
  double p_value = 0.0;
  CLI::Option* p_handle = nullptr;
  std::string output;
};

void add_cell_options(CLI::App* cmd, CellOptions& o, bool with_output) {
  cmd->add_option("--protocol", o.cell.protocol, "Protocol: ssmti | ismti | edfsa")
      ->check(CLI::IsMember({"ssmti", "ismti", "edfsa"}))
      ->capture_default_str();
  cmd->add_option("-n,--tags", o.cell.n, "Candidate tag count N")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("-q,--missing-rate", o.cell.missing_rate, "True missing rate in [0, 1]")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("-w,--width", o.cell.w, "Response string width in bits, 1..96")
      ->check(CLI::Range(1, 96))
      ->capture_default_str();
  o.p_handle = cmd->add_option("-p,--load", o.p_value,
                               "Fixed load factor (default: per-protocol optimum)")
                   ->check(CLI::PositiveNumber);
  cmd->add_option("--detect-err", o.cell.detection_error_prob,
                  "Per-tag detection error probability")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--capture", o.cell.capture_prob, "Capture-effect probability")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--trials", o.cell.trials, "Trials to aggregate")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--seed", o.cell.master_seed, "Master seed")->capture_default_str();
  cmd->add_option("--rate-policy", o.rate_policy,
                  "ismti frame sizing rate: given | estimate")
      ->check(CLI::IsMember({"given", "estimate"}))
      ->capture_default_str();
  cmd->add_option("--q-prior", o.cell.q_prior, "ismti initial rate estimate")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  if (with_output)
    cmd->add_option("-o,--output", o.output, "Write CSV here instead of stdout");
}

ExperimentCell finish_cell(CellOptions& o) {
  if (o.p_handle != nullptr && o.p_handle->count() > 0) o.cell.p_override = o.p_value;
  o.cell.rate_policy = policy_of(o.rate_policy);
  return o.cell;
}

void write_rows(const std::string& path, const std::vector<TrialReport>& rows) {
  std::ostringstream os;
  write_csv_header(os);
  for (const TrialReport& r : rows) write_csv_row(os, r);
  if (path.empty()) {
    std::cout << os.str();
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open output file: " + path);
  f << os.str();
  if (!f.good()) throw std::runtime_error("write failed: " + path);
}

struct SweepOptions {
  std::string protocol = "ssmti";
  std::string n_list = "10000";
  std::string q_list = "0.1";
  std::string w_list = "96";
  std::string p_list;
  double detect_err = 0.0;
  double capture = 0.0;
  int trials = 500;
  std::uint64_t seed = 1;
  std::string rate_policy = "given";
  double q_prior = 0.5;
  std::string output;
};

void add_sweep_options(CLI::App* cmd, SweepOptions& o) {
  cmd->add_option("--protocol", o.protocol, "Protocol: ssmti | ismti | edfsa")
      ->check(CLI::IsMember({"ssmti", "ismti", "edfsa"}))
      ->capture_default_str();
  cmd->add_option("--n-list", o.n_list, "Tag-count axis, e.g. 1000,5000 or 1000:10000:1000")
      ->capture_default_str();
  cmd->add_option("--q-list", o.q_list, "Missing-rate axis")->capture_default_str();
  cmd->add_option("--w-list", o.w_list, "String-width axis")->capture_default_str();
  cmd->add_option("--p-list", o.p_list, "Fixed-load axis (empty: per-protocol optimum)");
  cmd->add_option("--detect-err", o.detect_err, "Per-tag detection error probability")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--capture", o.capture, "Capture-effect probability")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--trials", o.trials, "Trials per cell")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "Master seed")->capture_default_str();
  cmd->add_option("--rate-policy", o.rate_policy, "ismti frame sizing rate: given | estimate")
      ->check(CLI::IsMember({"given", "estimate"}))
      ->capture_default_str();
  cmd->add_option("--q-prior", o.q_prior, "ismti initial rate estimate")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("-o,--output", o.output, "Write CSV here instead of stdout");
}

int run_sweep(const SweepOptions& o) {
  SweepConfig cfg;
  cfg.protocol = o.protocol;
  cfg.n = parse_axis_u64(o.n_list, 1, 100'000'000, "n");
  cfg.missing_rate = parse_axis(o.q_list);
  for (double q : cfg.missing_rate)
    if (q < 0.0 || q > 1.0)
      throw std::invalid_argument("missing-rate axis element outside [0, 1]");
  cfg.w.clear();
  for (std::uint64_t w : parse_axis_u64(o.w_list, 1, 96, "w"))
    cfg.w.push_back(static_cast<int>(w));
  if (!o.p_list.empty()) {
    cfg.p_override = parse_axis(o.p_list);
    for (double p : cfg.p_override)
      if (!(p > 0.0)) throw std::invalid_argument("load axis element must be > 0");
  }
  cfg.detection_error_prob = o.detect_err;
  cfg.capture_prob = o.capture;
  cfg.trials = o.trials;
  cfg.master_seed = o.seed;
  cfg.rate_policy = policy_of(o.rate_policy);
  cfg.q_prior = o.q_prior;
  write_rows(o.output, sweep(cfg));
  return 0;
}

struct OptimizeOptions {
  std::string q_list = "0,0.1,0.3,0.5,0.7,0.9";
  std::string curve;
  double curve_step = 0.02;
};

int run_optimize(const OptimizeOptions& o) {
  const double p2 = ssmti_p_opt();
  std::printf("ssmti: p_opt=%.6f efficiency=%.4f tags/ms arrange=%.7f ms/tag\n", p2,
              ssmti_efficiency(p2), 1.0 / ssmti_efficiency(p2));
  for (double q : parse_axis(o.q_list)) {
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("optimize: q outside [0, 1]");
    const double p3 = ismti_p_opt(q);
    std::printf("ismti q=%.4f: p_opt=%.6f efficiency=%.4f tags/ms\n", q, p3,
                ismti_efficiency(p3, q));
  }
  if (!o.curve.empty()) {
    if (!(o.curve_step > 0.0))
      throw std::invalid_argument("optimize: curve step must be > 0");
    std::ofstream f(o.curve);
    if (!f) throw std::runtime_error("cannot open curve file: " + o.curve);
    f << "q,p_opt,efficiency\n";
    for (double q = 0.0; q <= 0.98 + 1e-12; q += o.curve_step) {
      const double qq = std::min(q, 0.98);
      const double p3 = ismti_p_opt(qq);
      f << format_number(qq) << ',' << format_number(p3) << ','
        << format_number(ismti_efficiency(p3, qq)) << '\n';
    }
    if (!f.good()) throw std::runtime_error("write failed: " + o.curve);
  }
  return 0;
}

void print_result(const IdentificationResult& res) {
  std::printf("result: elapsed_ms=%.4f reader_bits=%llu tag_bits=%llu slots=%llu rounds=%llu\n",
              res.elapsed_ms, static_cast<unsigned long long>(res.reader_bits),
              static_cast<unsigned long long>(res.tag_bits),
              static_cast<unsigned long long>(res.slots_used),
              static_cast<unsigned long long>(res.rounds));
  std::printf("verdict: missing=%zu present=%zu false_pos=%llu false_neg=%llu\n",
              res.identified_missing.size(), res.identified_present.size(),
              static_cast<unsigned long long>(res.false_positives),
              static_cast<unsigned long long>(res.false_negatives));
}

int run_trace(const ExperimentCell& cell, int trial_index) {
  const Seed trial_seed = derive_seed(cell.master_seed, static_cast<std::uint64_t>(trial_index));
  const Inventory inv = make_inventory(cell.n, cell.missing_rate, derive_seed(trial_seed, 1));
  const ChannelConfig channel{cell.detection_error_prob, cell.capture_prob,
                              derive_seed(trial_seed, 2)};
  const Seed run_seed = derive_seed(trial_seed, 3);
  std::printf("trial %d: protocol=%s n=%llu q=%g w=%d present=%llu missing=%llu\n",
              trial_index, cell.protocol.c_str(), static_cast<unsigned long long>(cell.n),
              cell.missing_rate, cell.w,
              static_cast<unsigned long long>(inv.present_count()),
              static_cast<unsigned long long>(inv.missing_count()));

  if (cell.protocol == "ssmti") {
    SsmtiOptions opt;
    opt.w = cell.w;
    if (cell.p_override) opt.load = *cell.p_override;
    SsmtiTrace tr;
    const IdentificationResult res = run_ssmti(inv, opt, channel, run_seed, &tr);
    for (std::size_t i = 0; i < tr.rounds.size(); ++i) {
      const ArrangementRound& r = tr.rounds[i];
      std::printf("round %zu: f2=%llu bits=%llu arranged=%llu of %llu\n", i + 1,
                  static_cast<unsigned long long>(r.f2),
                  static_cast<unsigned long long>(r.broadcast_bits),
                  static_cast<unsigned long long>(r.arranged),
                  static_cast<unsigned long long>(r.unarranged));
    }
    if (tr.received.size() <= 32)
      for (std::size_t s = 0; s < tr.received.size(); ++s)
        std::printf("slot %zu: %s\n", s + 1, tr.received[s].c_str());
    else
      std::printf("(%zu verification slots, strings suppressed)\n", tr.received.size());
    print_result(res);
    return 0;
  }
  if (cell.protocol == "ismti") {
    IsmtiOptions opt;
    opt.w = cell.w;
    opt.policy = cell.rate_policy;
    opt.q_prior = cell.q_prior;
    opt.p_override = cell.p_override;
    IsmtiTrace tr;
    const IdentificationResult res = run_ismti(inv, opt, channel, run_seed, &tr);
    for (std::size_t i = 0; i < tr.rounds.size(); ++i) {
      const IsmtiRound& r = tr.rounds[i];
      std::printf(
          "round %zu: f3=%llu q_used=%.4f p=%.4f n1=%llu n11=%llu q_hat=%.4f "
          "missing+=%llu present+=%llu carry=%llu\n",
          i + 1, static_cast<unsigned long long>(r.f3), r.q_used, r.p,
          static_cast<unsigned long long>(r.n1), static_cast<unsigned long long>(r.n11),
          r.q_hat_next, static_cast<unsigned long long>(r.new_missing),
          static_cast<unsigned long long>(r.new_present),
          static_cast<unsigned long long>(r.carryover));
    }
    print_result(res);
    return 0;
  }
  if (cell.protocol == "edfsa") {
    EdfsaTrace tr;
    const IdentificationResult res = run_edfsa(inv, run_seed, &tr);
    for (std::size_t i = 0; i < tr.frames.size(); ++i) {
      const EdfsaFrame& r = tr.frames[i];
      std::printf("frame %zu: f=%llu empty=%llu singleton=%llu collision=%llu\n", i + 1,
                  static_cast<unsigned long long>(r.f),
                  static_cast<unsigned long long>(r.empty),
                  static_cast<unsigned long long>(r.singleton),
                  static_cast<unsigned long long>(r.collision));
    }
    print_result(res);
    return 0;
  }
  throw std::invalid_argument("unknown protocol: " + cell.protocol);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Missing-tag identification simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "mti 1.0.0");
  app.set_config("--config", "", "Read options from a key=value config file");

  CellOptions run_o;
  CLI::App* run_cmd = app.add_subcommand("run", "Aggregate one parameter cell into a CSV row");
  run_cmd->configurable();
  add_cell_options(run_cmd, run_o, true);

  SweepOptions sweep_o;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run a parameter grid, one CSV row per cell");
  sweep_cmd->configurable();
  add_sweep_options(sweep_cmd, sweep_o);

  OptimizeOptions opt_o;
  CLI::App* opt_cmd = app.add_subcommand("optimize", "Report load-factor optima");
  opt_cmd->configurable();
  opt_cmd->add_option("--q-list", opt_o.q_list, "Missing rates to report")
      ->capture_default_str();
  opt_cmd->add_option("--curve", opt_o.curve, "Write a q,p_opt,efficiency CSV curve here");
  opt_cmd->add_option("--curve-step", opt_o.curve_step, "Curve q resolution")
      ->capture_default_str();

  CellOptions trace_o;
  int trace_trial = 0;
  CLI::App* trace_cmd = app.add_subcommand("trace", "Log one trial round by round");
  trace_cmd->configurable();
  add_cell_options(trace_cmd, trace_o, false);
  trace_cmd->add_option("--trial", trace_trial, "Trial index within the cell")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      write_rows(run_o.output, {run_experiment(finish_cell(run_o))});
      return 0;
    }
    if (sweep_cmd->parsed()) return run_sweep(sweep_o);
    if (opt_cmd->parsed()) return run_optimize(opt_o);
    if (trace_cmd->parsed()) return run_trace(finish_cell(trace_o), trace_trial);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
