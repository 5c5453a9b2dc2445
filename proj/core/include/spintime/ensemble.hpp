#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "spintime/binning.hpp"
#include "spintime/guidance.hpp"
#include "spintime/rng.hpp"
#include "spintime/state_table.hpp"

namespace spintime {

enum class ArrivalStatus {
  arrived,
  censored,              ///< no crossing before the horizon
  aborted_singularity,   ///< trajectory ran into a wave-function node
  aborted_step_limit,    ///< integrator exceeded its step budget
};

const char* to_string(ArrivalStatus s);

/// Outcome of one trajectory: the first time z(t) reaches the plane z = L
/// and the transverse point of that crossing.
struct ArrivalRecord {
  ArrivalStatus status = ArrivalStatus::censored;
  double t_arrival = 0.0;                     ///< valid when arrived
  Eigen::Vector2d crossing_xy{0.0, 0.0};      ///< valid when arrived

  bool arrived() const { return status == ArrivalStatus::arrived; }
  bool aborted() const {
    return status == ArrivalStatus::aborted_singularity ||
           status == ArrivalStatus::aborted_step_limit;
  }
};

struct IntegratorOptions {
  double tol = 1e-8;               ///< absolute local error per step, position
  long max_steps = 10'000'000;
  double crossing_rel_tol = 1e-9;  ///< event refined to |z - L| < this * L
};

/// Positions sampled from |Psi_0|^2: analytic Gaussian transversally, inverse
/// CDF of the grid density in z. Bit-reproducible for a fixed seed.
std::vector<Eigen::Vector3d> sample_initial(long n, std::uint64_t seed,
                                            const WaveState& state0);

/// Deterministic trajectory (requires spec.deterministic()). Adaptive
/// Dormand-Prince 5(4) with dense output; the first sign change of z - L on an
/// accepted step is refined by bisection on the dense output.
ArrivalRecord integrate_trajectory(const Eigen::Vector3d& x0, const SpinDirection& n_dir,
                                   const DynamicsSpec& spec, const StateTable& table,
                                   double t_max, const IntegratorOptions& opts = {});

/// Stochastic trajectory (nu >= 0): Euler-Maruyama with fixed dt, per-step
/// crossing detection with linear time interpolation.
ArrivalRecord integrate_sde(const Eigen::Vector3d& x0, const SpinDirection& n_dir,
                            const DynamicsSpec& spec, const StateTable& table,
                            double t_max, double dt, std::uint64_t seed);

/// Deterministic/stochastic transport to a fixed time with no crossing event;
/// used for equivariance checks.
Eigen::Vector3d transport_position(const Eigen::Vector3d& x0, const SpinDirection& n_dir,
                                   const DynamicsSpec& spec, const StateTable& table,
                                   double t_query, const IntegratorOptions& opts,
                                   double sde_dt, std::uint64_t seed);

/// Everything needed to reproduce and aggregate one ensemble.
struct EnsembleConfig {
  long n_trajectories = 1000;
  std::uint64_t seed = 1;
  DynamicsSpec spec;
  SpinDirection n_dir;
  IntegratorOptions opts;
  double sde_dt_fraction = 1e-4;  ///< dt = fraction * t_max for nu > 0
};

struct EnsembleRun {
  std::vector<ArrivalRecord> records;
  std::uint64_t seed = 0;
  long n_trajectories = 0;
  DynamicsSpec spec;
  SpinDirection n_dir;
  PhysicalParams params;
  PacketConfig packet;

  double aborted_fraction() const;
  double censored_fraction() const;
};

/// Runs n trajectories over a shared read-only table. Per-trajectory seeds
/// are derived from (seed, index), so the result is independent of worker
/// count and scheduling.
EnsembleRun run_ensemble(const StateTable& table, const WaveState& state0,
                         const PacketConfig& packet, const EnsembleConfig& cfg,
                         int workers = 1);

/// Normalized histogram with censored bin and per-bin standard errors
/// sqrt(p(1-p)/N). Throws TooManyAborts when >= 1% of records aborted.
ArrivalDistribution arrival_distribution(const EnsembleRun& run, const TimeBinning& binning);

struct AlphaSweepPoint {
  double alpha = 0.0;
  double mean_t = 0.0;        ///< mean arrival over non-censored records
  double std_error = 0.0;     ///< standard error of that mean
  double censored_fraction = 0.0;
  long n_used = 0;
};

/// One ensemble per alpha (beta = 0, same base seed and packet for each).
std::vector<AlphaSweepPoint> mean_vs_alpha(const StateTable& table, const WaveState& state0,
                                           const PacketConfig& packet,
                                           const std::vector<double>& alphas,
                                           const EnsembleConfig& base, int workers = 1);

/// Transports all samples to t_query; entries that abort are dropped.
std::vector<Eigen::Vector3d> transport_positions(const StateTable& table,
                                                 const std::vector<Eigen::Vector3d>& x0s,
                                                 const SpinDirection& n_dir,
                                                 const DynamicsSpec& spec, double t_query,
                                                 const IntegratorOptions& opts,
                                                 double sde_dt, std::uint64_t seed,
                                                 int workers = 1);

/// CSV rows (index, t_arrival, x, y, status); censored/aborted rows leave
/// t_arrival, x, y empty.
void write_records_csv(std::ostream& os, const EnsembleRun& run, bool header = true);

}  // namespace spintime
