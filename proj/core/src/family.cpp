#include "spintime/family.hpp"

namespace spintime {

namespace {
constexpr double kDirTol = 1e-9;
}

void DistributionFamily::insert(const SpinDirection& dir, ArrivalDistribution dist) {
  dist.validate();
  if (!dists_.empty()) require_same_binning(dists_.front(), dist);
  if (const ArrivalDistribution* existing = find(dir)) {
    *const_cast<ArrivalDistribution*>(existing) = std::move(dist);
    return;
  }
  dirs_.push_back(dir);
  dists_.push_back(std::move(dist));
}

const ArrivalDistribution* DistributionFamily::find(const SpinDirection& dir) const {
  for (std::size_t i = 0; i < dirs_.size(); ++i) {
    if ((dirs_[i].n - dir.n).norm() < kDirTol) return &dists_[i];
  }
  return nullptr;
}

bool DistributionFamily::contains(const SpinDirection& dir) const {
  return find(dir) != nullptr;
}

const ArrivalDistribution& DistributionFamily::at(const SpinDirection& dir) const {
  if (const ArrivalDistribution* d = find(dir)) return *d;
  throw MissingDirection("no distribution stored for the requested spin direction");
}

const TimeBinning& DistributionFamily::binning() const {
  if (dists_.empty()) throw MissingDirection("distribution family is empty");
  return dists_.front().binning;
}

}  // namespace spintime
