#include "brw/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "brw/errors.hpp"

namespace brw {

double Pmf::at(std::int64_t x) const noexcept {
  const auto it = std::lower_bound(support.begin(), support.end(), x);
  if (it == support.end() || *it != x) return 0.0;
  return probs[static_cast<std::size_t>(it - support.begin())];
}

double Pmf::total() const noexcept { return std::accumulate(probs.begin(), probs.end(), 0.0) + tail_mass; }

double gw_generating_function(std::int64_t level, double s) {
  if (level < 0) throw DomainError("generation must be nonnegative");
  if (!(s >= 0.0 && s <= 1.0)) throw DomainError("generating function argument outside [0,1]");
  const double t = 1.0 - s;
  return 1.0 - t / (t * static_cast<double>(level) + 1.0);
}

Pmf gw_generation_pmf(std::int64_t level, std::int64_t max_k) {
  if (level < 1) throw DomainError("generation must be at least 1");
  if (max_k < 1) throw DomainError("max_k must be at least 1");
  const double l = static_cast<double>(level);
  Pmf p;
  p.support.push_back(0);
  p.probs.push_back(l / (l + 1.0));
  // l^{k-1} / (l+1)^{k+1}, by running ratio.
  double term = 1.0 / ((l + 1.0) * (l + 1.0));
  const double ratio = l / (l + 1.0);
  for (std::int64_t k = 1; k <= max_k; ++k) {
    p.support.push_back(k);
    p.probs.push_back(term);
    term *= ratio;
  }
  // Sum over k > max_k of l^{k-1}/(l+1)^{k+1} = ratio^{max_k} / (l+1).
  p.tail_mass = std::pow(ratio, static_cast<double>(max_k)) / (l + 1.0);
  return p;
}

Pmf gw_generation_pmf_by_convolution(std::int64_t level, std::int64_t max_k) {
  if (level < 1 || max_k < 1) throw DomainError("invalid convolution request");
  const auto K = static_cast<std::size_t>(max_k);
  // Values 0..K of a sum only involve summands in 0..K, so truncating the
  // child law at K is exact there. The parent count j is cut at kMaxParents,
  // where mu(j) = 2^{-j-1} underflows.
  constexpr std::size_t kMaxParents = 1100;
  std::vector<double> law(K + 1);
  for (std::size_t k = 0; k <= K; ++k) law[k] = std::ldexp(1.0, -static_cast<int>(k) - 1);

  auto mul = [K](const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> c(K + 1, 0.0);
    for (std::size_t i = 0; i <= K; ++i)
      for (std::size_t j = 0; i + j <= K; ++j) c[i + j] += a[i] * b[j];
    return c;
  };
  for (std::int64_t gen = 1; gen < level; ++gen) {
    // Z_{g+1} = sum of Z_1 iid copies of Z_g; Horner in the parent count.
    std::vector<double> acc(K + 1, 0.0);
    for (std::size_t j = kMaxParents + 1; j-- > 0;) {
      acc = mul(acc, law);
      acc[0] += std::ldexp(1.0, -static_cast<int>(j) - 1);
    }
    law.swap(acc);
  }
  Pmf p;
  for (std::size_t k = 0; k <= K; ++k) {
    p.support.push_back(static_cast<std::int64_t>(k));
    p.probs.push_back(law[k]);
  }
  p.tail_mass = std::max(0.0, 1.0 - std::accumulate(law.begin(), law.end(), 0.0));
  return p;
}

double srw_pmf(std::int64_t n, std::int64_t m) {
  if (n < 0) throw DomainError("negative walk length");
  if (m > n || m < -n || (n + m) % 2 != 0) return 0.0;
  const std::int64_t up = (n + m) / 2;
  const std::int64_t r = std::min(up, n - up);
  // C(n, r) / 2^n by running ratio.
  double b = std::ldexp(1.0, -static_cast<int>(n));
  for (std::int64_t t = 1; t <= r; ++t) b = b * static_cast<double>(n - r + t) / static_cast<double>(t);
  return b;
}

double excursion_pmf(std::int64_t n, std::int64_t m) {
  if (n < 1) throw DomainError("excursion_pmf needs n >= 1");
  if (m < 0) return 0.0;
  const double mm = static_cast<double>(m);
  return 2.0 * (mm + 1.0) * (mm + 1.0) / (static_cast<double>(n) + mm + 2.0) * srw_pmf(n, m);
}

Pmf brute_force_excursion_pmf(std::int64_t n) {
  if (n < 0) throw DomainError("negative walk length");
  if (n > 16) throw ResourceError("brute-force enumeration is limited to n <= 16");
  std::vector<std::uint64_t> hits(static_cast<std::size_t>(2 * n + 1), 0);
  const std::uint64_t paths = std::uint64_t{1} << n;
  for (std::uint64_t bits = 0; bits < paths; ++bits) {
    std::int64_t c = 0;
    std::int64_t lo = 0;
    for (std::int64_t t = 0; t < n; ++t) {
      c += ((bits >> t) & 1U) ? 1 : -1;
      lo = std::min(lo, c);
    }
    ++hits[static_cast<std::size_t>(c - 2 * lo)];
  }
  Pmf p;
  for (std::size_t m = 0; m < hits.size(); ++m) {
    if (hits[m] == 0) continue;
    p.support.push_back(static_cast<std::int64_t>(m));
    p.probs.push_back(static_cast<double>(hits[m]) / static_cast<double>(paths));
  }
  return p;
}

double gaussian_moment(int order) {
  switch (order) {
    case 1: return 0.0;
    case 2: return 1.0;
    case 3: return 0.0;
    case 4: return 3.0;
    default: throw DomainError("gaussian moment order must be 1..4");
  }
}

double normal_cdf(double x) {
  if (std::isnan(x)) throw DomainError("normal_cdf of NaN");
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

}  // namespace brw
