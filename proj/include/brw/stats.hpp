#pragma once

// Streaming moments, jackknife summaries and the test battery.

#include <cstdint>
#include <span>
#include <vector>

namespace brw {

/// Count, mean and central moment sums M2..M4, updated one value at a time
/// and merged pairwise with the parallel update formulas.
class MomentAccumulator {
 public:
  void add(double x) noexcept;
  void merge(const MomentAccumulator& other) noexcept;

  std::uint64_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  /// Unbiased variance; 0 for fewer than 2 values.
  double variance() const noexcept;
  /// m2 = M2 / n (plug-in).
  double central_moment(int order) const noexcept;
  double skewness() const noexcept;
  double excess_kurtosis() const noexcept;
  double min() const noexcept { return min_; }
  double max() const noexcept { return max_; }

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double m3_ = 0.0;
  double m4_ = 0.0;
  double min_ = 0.0;
  double max_ = 0.0;
};

struct SampleSummary {
  std::uint64_t n_samples = 0;
  double mean = 0.0;
  double variance = 0.0;  ///< unbiased
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  double fourth_central = 0.0;  ///< plug-in E<X>^4
  double se_mean = 0.0;         ///< jackknife standard errors
  double se_variance = 0.0;
  double se_skewness = 0.0;
  double se_kurtosis = 0.0;
  double se_fourth_central = 0.0;
  double min = 0.0;
  double max = 0.0;
};

/// Moments and leave-one-out jackknife standard errors in O(n).
/// Throws InsufficientDataError for fewer than 2 samples.
SampleSummary summarize(std::span<const double> xs);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  std::vector<double> residuals;
};

/// Ordinary least squares of y on x; needs at least 2 distinct x.
LinearFit ols(std::span<const double> x, std::span<const double> y);
/// OLS of log y on log x; every value must be positive.
LinearFit loglog_fit(std::span<const double> x, std::span<const double> y);

struct Correlation {
  double r = 0.0;
  double se = 0.0;  ///< sqrt((1 - r^2) / (n - 2))
};
Correlation pearson(std::span<const double> x, std::span<const double> y);

/// Kolmogorov distance sup |F_n - Phi| of already standardized values.
double ks_distance_normal(std::span<const double> z);
/// Asymptotic p-value of a KS distance d on n samples.
double ks_pvalue(double d, std::size_t n);
/// Anderson-Darling A^2 against Phi.
double anderson_darling_normal(std::span<const double> z);

struct CltBattery {
  std::size_t n = 0;
  double skewness = 0.0;
  double skewness_z = 0.0;
  double excess_kurtosis = 0.0;
  double kurtosis_z = 0.0;
  double ks_distance = 0.0;
  double ks_p = 0.0;
  double ad_statistic = 0.0;
  bool gaussian_compatible = false;  ///< |z| <= 4 for both moments and ks_p >= 1e-3
};

/// Studentizes by the sample mean and SD, then runs all diagnostics.
/// Throws InsufficientDataError below 100 samples or for zero variance.
CltBattery clt_battery(std::span<const double> samples);

struct ChiSquare {
  double statistic = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
  std::size_t cells = 0;
};

/// Goodness of fit of counts to probabilities (same length). Trailing cells
/// with expected count below min_expected are pooled into one, and the
/// remaining probability mass outside `probs` joins that last cell.
ChiSquare chi_square_gof(std::span<const std::uint64_t> observed, std::span<const double> probs,
                         double min_expected = 5.0);

/// Pearson test of independence for a 2x2 table; throws InsufficientDataError
/// when an expected cell is below min_expected.
ChiSquare chi_square_2x2(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d,
                         double min_expected = 5.0);

/// Upper tail of the chi-square law.
double chi_square_sf(double x, double dof);

}  // namespace brw
