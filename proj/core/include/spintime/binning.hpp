#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spintime/errors.hpp"
#include "spintime/spin.hpp"

namespace spintime {

/// Uniform bins on [0, t_max) plus one trailing "censored" bin (index n_bins)
/// for trajectories that never cross before the horizon. Keeping the censored
/// mass explicit means every distribution lives on a complete outcome space.
struct TimeBinning {
  double t_max = 1.0;
  int n_bins = 1;

  int n_outcomes() const { return n_bins + 1; }
  int censored_index() const { return n_bins; }
  double width() const { return t_max / n_bins; }
  double lower_edge(int k) const { return k * width(); }
  double upper_edge(int k) const { return (k + 1) * width(); }
  double midpoint(int k) const { return (k + 0.5) * width(); }

  /// Bin index of an arrival time; times >= t_max land in the censored bin.
  int bin_of(double t) const {
    if (t >= t_max) return censored_index();
    int k = static_cast<int>(t / width());
    if (k < 0) k = 0;
    if (k >= n_bins) k = n_bins - 1;
    return k;
  }

  bool operator==(const TimeBinning& o) const {
    return t_max == o.t_max && n_bins == o.n_bins;
  }

  void validate() const {
    if (!(t_max > 0.0)) throw ConfigError("t_max must be > 0");
    if (n_bins < 1) throw ConfigError("n_bins must be >= 1");
  }
};

/// Provenance tag attached to a distribution.
struct DistributionLabel {
  SpinDirection n_dir;
  double lambda = 0.0;
  double diffusion_nu = 0.0;
  std::uint64_t seed = 0;
  std::string text;  ///< free-form, e.g. "model" for POVM-generated data
};

/// Normalized histogram of first-arrival times, censored bin included.
struct ArrivalDistribution {
  TimeBinning binning;
  std::vector<double> mass;     ///< size n_outcomes(), sums to 1
  std::vector<double> stderrs;  ///< per-bin Monte Carlo standard error (0 = exact)
  long n_samples = 0;           ///< 0 for model-generated (exact) distributions
  DistributionLabel label;

  double censored_mass() const { return mass.at(binning.censored_index()); }

  /// Mean arrival time over the non-censored bins (bin midpoints), together
  /// with the non-censored mass it is conditioned on.
  double mean_uncensored() const;

  /// Root-sum-square of the per-bin standard errors.
  double noise() const;

  void validate(double tol = 1e-12) const;
};

/// Checks both distributions share one binning; throws BinningMismatch.
void require_same_binning(const ArrivalDistribution& a, const ArrivalDistribution& b);

}  // namespace spintime
