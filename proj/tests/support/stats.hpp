#pragma once

// Test-only statistical oracles: chi-square and Kolmogorov-Smirnov p-values,
// histogram helpers and the closed-form free-Gaussian density. These stay
// independent of the library code they are used to check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace testsupport {

// ---------------------------------------------------------------------------
// regularized incomplete gamma Q(a, x), for chi-square tail probabilities
// ---------------------------------------------------------------------------

inline double gammln(double xx) {
  static const double cof[6] = {76.18009172947146,  -86.50532032941677,
                                24.01409824083091,  -1.231739572450155,
                                0.1208650973866179e-2, -0.5395239384953e-5};
  double x = xx, y = xx;
  double tmp = x + 5.5;
  tmp -= (x + 0.5) * std::log(tmp);
  double ser = 1.000000000190015;
  for (int j = 0; j < 6; ++j) ser += cof[j] / ++y;
  return -tmp + std::log(2.5066282746310005 * ser / x);
}

inline double gamma_series_p(double a, double x) {
  const double gln = gammln(a);
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < 500; ++n) {
    ++ap;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - gln);
}

inline double gamma_cf_q(double a, double x) {
  const double gln = gammln(a);
  const double fpmin = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / fpmin;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < fpmin) d = fpmin;
    c = b + an / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - gln) * h;
}

/// Q(a, x) = 1 - P(a, x), the upper regularized incomplete gamma.
inline double gammq(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gammq domain");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_series_p(a, x);
  return gamma_cf_q(a, x);
}

/// Survival probability of a chi-square statistic with `dof` degrees.
inline double chi2_pvalue(double chi2, int dof) {
  return gammq(0.5 * dof, 0.5 * chi2);
}

/// Pearson chi-square of observed counts against expected probabilities.
/// Bins are merged left-to-right until each merged bin expects >= min_expected
/// counts. Returns the p-value.
inline double chi2_test(std::span<const long> observed, std::span<const double> expected_p,
                        double min_expected = 5.0) {
  if (observed.size() != expected_p.size())
    throw std::invalid_argument("chi2_test size mismatch");
  long n_total = 0;
  for (long o : observed) n_total += o;

  std::vector<double> exp_counts;
  std::vector<double> obs_counts;
  double acc_e = 0.0, acc_o = 0.0;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    acc_e += expected_p[k] * n_total;
    acc_o += static_cast<double>(observed[k]);
    if (acc_e >= min_expected) {
      exp_counts.push_back(acc_e);
      obs_counts.push_back(acc_o);
      acc_e = acc_o = 0.0;
    }
  }
  if (acc_e > 0.0 && !exp_counts.empty()) {
    exp_counts.back() += acc_e;
    obs_counts.back() += acc_o;
  }
  if (exp_counts.size() < 2) throw std::invalid_argument("chi2_test: too few usable bins");

  double chi2 = 0.0;
  for (std::size_t k = 0; k < exp_counts.size(); ++k) {
    const double d = obs_counts[k] - exp_counts[k];
    chi2 += d * d / exp_counts[k];
  }
  return chi2_pvalue(chi2, static_cast<int>(exp_counts.size()) - 1);
}

// ---------------------------------------------------------------------------
// Kolmogorov-Smirnov one-sample test
// ---------------------------------------------------------------------------

/// Asymptotic Kolmogorov survival function.
inline double ks_prob(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

/// One-sample KS p-value of data against a model CDF.
inline double ks_test(std::vector<double> data, const std::function<double(double)>& cdf) {
  if (data.size() < 5) throw std::invalid_argument("ks_test: too few samples");
  std::sort(data.begin(), data.end());
  const double n = static_cast<double>(data.size());
  double d_stat = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double f = cdf(data[i]);
    d_stat = std::max(d_stat, std::abs(f - static_cast<double>(i) / n));
    d_stat = std::max(d_stat, std::abs(static_cast<double>(i + 1) / n - f));
  }
  const double sq = std::sqrt(n);
  return ks_prob((sq + 0.12 + 0.11 / sq) * d_stat);
}

// ---------------------------------------------------------------------------
// closed-form free-particle Gaussian density
// ---------------------------------------------------------------------------

/// |psi_t(z)|^2 for a free Gaussian with initial width parameter d (so that
/// psi_0 ~ exp(-(z-z0)^2/(4 d^2) + i p0 z / hbar)); spreading
/// sigma_t = d sqrt(1 + (hbar t / (2 m d^2))^2), center z0 + p0 t / m.
inline double free_gaussian_density(double z, double t, double z0, double d, double p0,
                                    double hbar, double mass) {
  const double rate = hbar * t / (2.0 * mass * d * d);
  const double sig2 = d * d * (1.0 + rate * rate);
  const double center = z0 + p0 * t / mass;
  return std::exp(-(z - center) * (z - center) / (2.0 * sig2)) /
         std::sqrt(2.0 * M_PI * sig2);
}

}  // namespace testsupport
