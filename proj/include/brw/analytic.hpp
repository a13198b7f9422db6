#pragma once

// Closed forms and enumeration oracles.

#include <cstdint>
#include <vector>

namespace brw {

struct Pmf {
  std::vector<std::int64_t> support;  ///< sorted, distinct
  std::vector<double> probs;
  double tail_mass = 0.0;  ///< probability beyond the listed support

  double at(std::int64_t x) const noexcept;
  double total() const noexcept;
};

/// f_l(s) = E[s^{Z_l}] = 1 - (1-s) / ((1-s) l + 1) for the critical geometric GW process.
double gw_generating_function(std::int64_t level, double s);

/// P(Z_l = k), k = 0..max_k, with the remaining mass in tail_mass.
Pmf gw_generation_pmf(std::int64_t level, std::int64_t max_k);

/// Reference: P(Z_l = .) by repeated truncated convolution of the offspring law.
Pmf gw_generation_pmf_by_convolution(std::int64_t level, std::int64_t max_k);

/// P(C_n = m) for the simple random walk started at 0.
double srw_pmf(std::int64_t n, std::int64_t m);

/// P(C_n - 2 min_{0..n} C = m) = 2 (m+1)^2 / (n+m+2) P(C_n = m).
double excursion_pmf(std::int64_t n, std::int64_t m);

/// Exact law of C_n - 2 min_{0..n} C over all 2^n paths; n <= 16.
Pmf brute_force_excursion_pmf(std::int64_t n);

/// E[Z^order] for Z ~ N(0,1), order 1..4.
double gaussian_moment(int order);

/// Standard normal CDF.
double normal_cdf(double x);

}  // namespace brw
