#include "spintime/binning.hpp"

#include <cmath>
#include <numeric>

namespace spintime {

double ArrivalDistribution::mean_uncensored() const {
  double m = 0.0, w = 0.0;
  for (int k = 0; k < binning.n_bins; ++k) {
    m += binning.midpoint(k) * mass[k];
    w += mass[k];
  }
  return (w > 0.0) ? m / w : 0.0;
}

double ArrivalDistribution::noise() const {
  double s = 0.0;
  for (double e : stderrs) s += e * e;
  return std::sqrt(s);
}

void ArrivalDistribution::validate(double tol) const {
  binning.validate();
  if (static_cast<int>(mass.size()) != binning.n_outcomes())
    throw ConfigError("distribution mass size does not match binning");
  double sum = 0.0;
  for (double m : mass) {
    if (!(m >= 0.0)) throw ConfigError("distribution has a negative bin");
    sum += m;
  }
  if (std::abs(sum - 1.0) > tol)
    throw ConfigError("distribution mass does not sum to 1");
}

void require_same_binning(const ArrivalDistribution& a, const ArrivalDistribution& b) {
  if (!(a.binning == b.binning) || a.mass.size() != b.mass.size())
    throw BinningMismatch("distributions use different time binnings");
}

}  // namespace spintime
