#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "spintime/family.hpp"

namespace spintime {

enum class SignalAxis { z, x };

/// The detection-time distribution Bob sees when Alice measures along `axis`:
/// the even mixture (P_{+axis} + P_{-axis}) / 2. Throws MissingDirection.
ArrivalDistribution bob_mixture(const DistributionFamily& family, SignalAxis axis);

/// One protocol run of n_rounds: per round draw the collapsed sign fairly,
/// then one bin index from the matching distribution. Bit-reproducible.
std::vector<int> run_protocol(const DistributionFamily& family, int bit, int n_rounds,
                              std::uint64_t seed);

/// Log-likelihood-ratio decision between the two mixtures, with additive
/// smoothing of empty bins; ties decode as 0.
int decode(std::span<const int> samples, const DistributionFamily& family);

struct AccuracyReport {
  int n_rounds = 0;
  int trials = 0;
  double accuracy = 0.0;
  double binomial_error = 0.0;  ///< sqrt(acc (1-acc) / trials)
};

/// Repeats the protocol with random bits over many trials and reports the
/// decode accuracy. Trials derive their own seeds, so worker count does not
/// change the result.
AccuracyReport protocol_accuracy(const DistributionFamily& family, int n_rounds,
                                 int trials, std::uint64_t seed, int workers = 1);

/// CSV rows (n_rounds, trials, accuracy, binomial_error).
void write_accuracy_csv(std::ostream& os, std::span<const AccuracyReport> rows,
                        bool header = true);

}  // namespace spintime
