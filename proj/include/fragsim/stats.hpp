#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace fragsim::stats {

/// Right-continuous empirical CDF. Throws EmptySample.
class Ecdf {
 public:
  explicit Ecdf(std::vector<double> samples);
  double operator()(double x) const;
  const std::vector<double>& sorted() const noexcept { return sorted_; }

 private:
  std::vector<double> sorted_;
};

using Cdf = std::function<double(double)>;

/// One-sample Kolmogorov-Smirnov distance. Ties are grouped, and the
/// left limit of the reference CDF is read just below each sample value, so
/// atomic references (including an ECDF of the same data) are handled.
double ks_stat(std::span<const double> samples, const Cdf& cdf);

/// Two-sample Kolmogorov-Smirnov distance sup |F_a - F_b|.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Asymptotic Kolmogorov critical value c(alpha) = sqrt(-ln(alpha / 2) / 2).
double kolmogorov_c(double alpha);

/// c(alpha) / sqrt(n). Throws TooFewSamples for n < 50.
double ks_threshold(std::size_t n, double alpha);

/// c(alpha) * sqrt((n + m) / (n m)). Throws TooFewSamples if n or m < 50.
double ks_two_sample_threshold(std::size_t n, std::size_t m, double alpha);

/// Upper tail of the chi-square distribution.
double chi_square_sf(double statistic, double df);

struct ChiSquareResult {
  double statistic;
  std::size_t df;
  double p_value;
  std::size_t bins;
};

/// Pearson test of observed counts against category probabilities.
/// Adjacent categories are pooled until every expected count is >= 5.
/// Throws InsufficientData if fewer than two bins remain.
ChiSquareResult chi_square_test(std::span<const std::uint64_t> observed, std::span<const double> probabilities);

/// counts[k] = number of observations equal to k. Chi-square p-value
/// against Poisson(rate), pooling bins to expected counts >= 5.
/// Throws InsufficientData for fewer than 500 observations or one bin.
double poisson_pmf_test(std::span<const std::uint64_t> counts, double rate);

}  // namespace fragsim::stats
