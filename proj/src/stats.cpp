#include "fragsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "fragsim/error.hpp"

namespace fragsim::stats {

Ecdf::Ecdf(std::vector<double> samples) : sorted_(std::move(samples)) {
  if (sorted_.empty()) throw Error(ErrorCode::EmptySample, "ecdf of an empty sample");
  std::sort(sorted_.begin(), sorted_.end());
}

double Ecdf::operator()(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double ks_stat(std::span<const double> samples, const Cdf& cdf) {
  if (samples.empty()) throw Error(ErrorCode::EmptySample, "ks_stat of an empty sample");
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < x.size()) {
    std::size_t j = i;
    while (j < x.size() && x[j] == x[i]) ++j;
    const double below = static_cast<double>(i) / n;
    const double at = static_cast<double>(j) / n;
    const double f = cdf(x[i]);
    const double f_left = cdf(std::nextafter(x[i], -HUGE_VAL));
    d = std::max({d, std::abs(at - f), std::abs(below - f_left)});
    i = j;
  }
  return d;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::EmptySample, "ks_two_sample of an empty sample");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n = static_cast<double>(x.size());
  const double m = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() || j < y.size()) {
    double v;
    if (j == y.size() || (i < x.size() && x[i] <= y[j])) {
      v = x[i];
    } else {
      v = y[j];
    }
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  return d;
}

double kolmogorov_c(double alpha) { return std::sqrt(-0.5 * std::log(alpha / 2.0)); }

double ks_threshold(std::size_t n, double alpha) {
  if (n < 50) throw Error(ErrorCode::TooFewSamples, "asymptotic KS threshold needs n >= 50");
  return kolmogorov_c(alpha) / std::sqrt(static_cast<double>(n));
}

double ks_two_sample_threshold(std::size_t n, std::size_t m, double alpha) {
  if (n < 50 || m < 50) throw Error(ErrorCode::TooFewSamples, "asymptotic KS threshold needs n, m >= 50");
  const double dn = static_cast<double>(n);
  const double dm = static_cast<double>(m);
  return kolmogorov_c(alpha) * std::sqrt((dn + dm) / (dn * dm));
}

double chi_square_sf(double statistic, double df) {
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(df / 2.0, statistic / 2.0);
}

ChiSquareResult chi_square_test(std::span<const std::uint64_t> observed, std::span<const double> probabilities) {
  if (observed.size() != probabilities.size()) {
    throw Error(ErrorCode::InsufficientData, "observed/probability size mismatch");
  }
  const double total = static_cast<double>(std::accumulate(observed.begin(), observed.end(), std::uint64_t{0}));
  struct Bin {
    double obs = 0.0;
    double exp = 0.0;
  };
  std::vector<Bin> bins;
  Bin open;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    open.obs += static_cast<double>(observed[k]);
    open.exp += probabilities[k] * total;
    if (open.exp >= 5.0) {
      bins.push_back(open);
      open = Bin{};
    }
  }
  if (open.obs > 0.0 || open.exp > 0.0) {
    if (bins.empty()) {
      bins.push_back(open);
    } else {
      bins.back().obs += open.obs;
      bins.back().exp += open.exp;
    }
  }
  if (bins.size() < 2) throw Error(ErrorCode::InsufficientData, "fewer than two bins after pooling");
  double stat = 0.0;
  for (const auto& b : bins) {
    if (b.exp <= 0.0) {
      if (b.obs > 0.0) stat = HUGE_VAL;
      continue;
    }
    stat += (b.obs - b.exp) * (b.obs - b.exp) / b.exp;
  }
  const std::size_t df = bins.size() - 1;
  return {stat, df, chi_square_sf(stat, static_cast<double>(df)), bins.size()};
}

double poisson_pmf_test(std::span<const std::uint64_t> counts, double rate) {
  const std::uint64_t total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  if (total < 500) throw Error(ErrorCode::InsufficientData, "need at least 500 observations");
  if (!(rate > 0.0)) throw Error(ErrorCode::InsufficientData, "rate must be positive");
  // Categories 0..K-1 plus a final ">= K" category carrying the tail.
  std::size_t k_max = counts.size();
  while (true) {
    const double mean_tail = rate + 10.0 * std::sqrt(rate) + 10.0;
    if (static_cast<double>(k_max) >= mean_tail) break;
    ++k_max;
  }
  std::vector<std::uint64_t> observed(k_max + 1, 0);
  std::vector<double> probabilities(k_max + 1, 0.0);
  for (std::size_t k = 0; k < counts.size(); ++k) observed[std::min(k, k_max)] += counts[k];
  double cumulative = 0.0;
  for (std::size_t k = 0; k < k_max; ++k) {
    const double pk = std::exp(-rate + static_cast<double>(k) * std::log(rate) - std::lgamma(static_cast<double>(k) + 1.0));
    probabilities[k] = pk;
    cumulative += pk;
  }
  probabilities[k_max] = std::max(0.0, 1.0 - cumulative);
  return chi_square_test(observed, probabilities).p_value;
}

}  // namespace fragsim::stats
