#pragma once

#include <vector>

#include "spintime/binning.hpp"
#include "spintime/spin.hpp"

namespace spintime {

/// A set of arrival distributions indexed by spin direction, all on one
/// shared binning. Lookup is by direction vector within a small tolerance.
class DistributionFamily {
 public:
  void insert(const SpinDirection& dir, ArrivalDistribution dist);

  bool contains(const SpinDirection& dir) const;

  /// Throws MissingDirection when absent.
  const ArrivalDistribution& at(const SpinDirection& dir) const;

  const std::vector<SpinDirection>& directions() const { return dirs_; }
  const std::vector<ArrivalDistribution>& distributions() const { return dists_; }
  std::size_t size() const { return dirs_.size(); }
  const TimeBinning& binning() const;

 private:
  const ArrivalDistribution* find(const SpinDirection& dir) const;

  std::vector<SpinDirection> dirs_;
  std::vector<ArrivalDistribution> dists_;
};

}  // namespace spintime
