#include "spintime/signaling.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "spintime/parallel.hpp"
#include "spintime/rng.hpp"
#include "spintime/textio.hpp"

namespace spintime {

namespace {

SpinDirection plus_dir(SignalAxis axis) {
  return axis == SignalAxis::z ? SpinDirection::plus_z() : SpinDirection::plus_x();
}

SpinDirection minus_dir(SignalAxis axis) {
  return axis == SignalAxis::z ? SpinDirection::minus_z() : SpinDirection::minus_x();
}

int sample_bin(const ArrivalDistribution& dist, double u) {
  double acc = 0.0;
  const int last = static_cast<int>(dist.mass.size()) - 1;
  for (int k = 0; k <= last; ++k) {
    acc += dist.mass[k];
    if (u < acc) return k;
  }
  return last;
}

/// Mixture probabilities with empty bins lifted to eps, renormalized.
std::vector<double> smoothed(const ArrivalDistribution& dist, double eps) {
  std::vector<double> p = dist.mass;
  double sum = 0.0;
  for (double& v : p) {
    if (v <= 0.0) v = eps;
    sum += v;
  }
  for (double& v : p) v /= sum;
  return p;
}

}  // namespace

ArrivalDistribution bob_mixture(const DistributionFamily& family, SignalAxis axis) {
  const ArrivalDistribution& plus = family.at(plus_dir(axis));
  const ArrivalDistribution& minus = family.at(minus_dir(axis));
  require_same_binning(plus, minus);

  ArrivalDistribution mix;
  mix.binning = plus.binning;
  mix.n_samples = plus.n_samples + minus.n_samples;
  mix.mass.resize(plus.mass.size());
  mix.stderrs.resize(plus.mass.size());
  for (std::size_t k = 0; k < plus.mass.size(); ++k) {
    mix.mass[k] = 0.5 * (plus.mass[k] + minus.mass[k]);
    mix.stderrs[k] =
        0.5 * std::sqrt(plus.stderrs[k] * plus.stderrs[k] +
                        minus.stderrs[k] * minus.stderrs[k]);
  }
  mix.label.text = axis == SignalAxis::z ? "mixture_z" : "mixture_x";
  return mix;
}

std::vector<int> run_protocol(const DistributionFamily& family, int bit, int n_rounds,
                              std::uint64_t seed) {
  if (n_rounds < 1) throw ConfigError("n_rounds must be >= 1");
  const SignalAxis axis = bit == 0 ? SignalAxis::z : SignalAxis::x;
  const ArrivalDistribution& plus = family.at(plus_dir(axis));
  const ArrivalDistribution& minus = family.at(minus_dir(axis));

  Rng rng(seed);
  std::vector<int> samples(n_rounds);
  for (int r = 0; r < n_rounds; ++r) {
    const bool sign_plus = rng.uniform() < 0.5;  // collapse sign, fair coin
    samples[r] = sample_bin(sign_plus ? plus : minus, rng.uniform());
  }
  return samples;
}

int decode(std::span<const int> samples, const DistributionFamily& family) {
  const ArrivalDistribution mix_z = bob_mixture(family, SignalAxis::z);
  const ArrivalDistribution mix_x = bob_mixture(family, SignalAxis::x);

  long n_samples = 0;
  for (const auto& d : family.distributions()) n_samples = std::max(n_samples, d.n_samples);
  const double eps =
      1.0 / (2.0 * static_cast<double>(mix_z.mass.size()) *
             static_cast<double>(std::max<long>(1, n_samples)));

  const std::vector<double> pz = smoothed(mix_z, eps);
  const std::vector<double> px = smoothed(mix_x, eps);

  double llr = 0.0;  // log P(samples | z) - log P(samples | x)
  for (int k : samples) llr += std::log(pz.at(k)) - std::log(px.at(k));
  return llr >= 0.0 ? 0 : 1;
}

AccuracyReport protocol_accuracy(const DistributionFamily& family, int n_rounds,
                                 int trials, std::uint64_t seed, int workers) {
  if (trials < 1) throw ConfigError("trials must be >= 1");
  std::vector<int> correct(trials, 0);
  parallel_for(static_cast<std::size_t>(trials), workers, [&](std::size_t i) {
    const std::uint64_t s = derive_seed(seed, i);
    Rng pick(s);
    const int bit = pick.uniform() < 0.5 ? 0 : 1;
    const auto samples = run_protocol(family, bit, n_rounds, derive_seed(s, 1));
    correct[i] = decode(samples, family) == bit ? 1 : 0;
  });
  AccuracyReport rep;
  rep.n_rounds = n_rounds;
  rep.trials = trials;
  long n_ok = 0;
  for (int c : correct) n_ok += c;
  rep.accuracy = static_cast<double>(n_ok) / trials;
  rep.binomial_error = std::sqrt(rep.accuracy * (1.0 - rep.accuracy) / trials);
  return rep;
}

void write_accuracy_csv(std::ostream& os, std::span<const AccuracyReport> rows,
                        bool header) {
  if (header) os << "n_rounds,trials,accuracy,binomial_error\n";
  for (const auto& r : rows)
    os << r.n_rounds << ',' << r.trials << ',' << fmt_g(r.accuracy) << ','
       << fmt_g(r.binomial_error) << '\n';
}

}  // namespace spintime
