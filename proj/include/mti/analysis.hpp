#pragma once

// Efficiency models and load-factor optimization.
//
// Both protocols size their vectors as f = N*/p for a load factor p (tags per
// vector bit). The efficiency functions below measure identified tags per ms
// as a function of p; they are smooth and unimodal on the searched intervals,
// so a golden-section search pins the optimum. The SSMTI optimum sits at
// p ~= 1.50, which prices arrangement at about 0.0623 ms per tag.

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "mti/timing.hpp"

namespace mti {

// Arrangement cost per tag at the optimal SSMTI load (1 / peak efficiency).
inline constexpr double kSsmtiArrangeMsPerTag = 0.0623;

// Derivative-free maximizer for unimodal f on [lo, hi].
template <class F>
double golden_section_max(F&& f, double lo, double hi, double tol) {
  static const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return (a + b) / 2.0;
}

// Tags arranged per ms of SSMTI stages 1-3, as a function of the load p.
inline double ssmti_efficiency(double p) {
  if (p <= 0.0) throw std::domain_error("ssmti_efficiency: p must be > 0");
  const double e = std::exp(-p);
  const double arranged_per_bit = p * e + 0.5 * p * p * e;
  const double bits_per_bucket = p * e + 0.25 * p * p * e + 1.0;
  return arranged_per_bit / (bits_per_bucket * (kTagMs / 96.0));
}

inline double ssmti_p_opt() {
  return golden_section_max([](double p) { return ssmti_efficiency(p); }, 0.1, 10.0, 1e-6);
}

// Predicted SSMTI total time: arrangement at the optimal load plus one
// verification pass of ceil(N/w) slots.
inline double ssmti_predicted_time_ms(std::uint64_t n, int w) {
  if (n < 1) throw std::invalid_argument("ssmti_predicted_time_ms: n must be >= 1");
  const std::uint64_t slots = (n + static_cast<std::uint64_t>(w) - 1) / static_cast<std::uint64_t>(w);
  return kSsmtiArrangeMsPerTag * static_cast<double>(n) +
         static_cast<double>(slots) * string_time_ms(w);
}

// Tags identified per ms of an ISMTI round at load p and missing rate q.
inline double ismti_efficiency(double p, double q) {
  if (p <= 0.0) throw std::domain_error("ismti_efficiency: p must be > 0");
  if (q < 0.0 || q > 1.0) throw std::domain_error("ismti_efficiency: q outside [0, 1]");
  const double e = std::exp(-p);
  const double resolved_per_bit = p * e + p * q * std::exp(-p * (1.0 - q)) - p * q * e;
  return 96.0 * resolved_per_bit / (kTagMs + string_time_ms(96));
}

inline double ismti_p_opt(double q) {
  if (q < 0.0 || q > 1.0) throw std::domain_error("ismti_p_opt: q outside [0, 1]");
  return golden_section_max([q](double p) { return ismti_efficiency(p, q); }, 0.1, 30.0, 1e-6);
}

}  // namespace mti
