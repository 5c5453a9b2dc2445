#include "spintime/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "spintime/parallel.hpp"
#include "spintime/textio.hpp"

namespace spintime {

const char* to_string(ArrivalStatus s) {
  switch (s) {
    case ArrivalStatus::arrived: return "arrived";
    case ArrivalStatus::censored: return "censored";
    case ArrivalStatus::aborted_singularity: return "aborted_singularity";
    case ArrivalStatus::aborted_step_limit: return "aborted_step_limit";
  }
  return "unknown";
}

std::vector<Eigen::Vector3d> sample_initial(long n, std::uint64_t seed,
                                            const WaveState& state0) {
  const LongitudinalGrid& grid = state0.grid();
  const PhysicalParams& p = state0.params();
  const double sigma = std::sqrt(p.hbar / (2.0 * p.mass * p.omega));
  const double dz = grid.dz();

  // cumulative of |f0|^2 dz over the interior nodes, for inverse-CDF sampling
  const auto f = state0.f_nodes();
  const int nn = grid.n_points;
  std::vector<double> cum(nn + 1, 0.0);
  for (int j = 1; j <= nn; ++j) cum[j] = cum[j - 1] + std::norm(f[j]) * dz;
  const double total = cum[nn];

  std::vector<Eigen::Vector3d> out(static_cast<std::size_t>(n));
  Rng rng(seed);
  for (long i = 0; i < n; ++i) {
    const double x = sigma * rng.normal();
    const double y = sigma * rng.normal();
    const double u = rng.uniform() * total;
    // find the bin holding u, then interpolate linearly inside it
    const auto it = std::upper_bound(cum.begin(), cum.end(), u);
    int j = static_cast<int>(it - cum.begin());
    j = std::clamp(j, 1, nn);
    const double in_bin = cum[j] - cum[j - 1];
    const double frac = in_bin > 0.0 ? (u - cum[j - 1]) / in_bin : 0.5;
    // bin j covers (z_{j-1}, z_j]
    const double z = (j - 1 + frac) * dz;
    out[static_cast<std::size_t>(i)] = {x, y, z};
  }
  return out;
}

namespace {

// Dormand-Prince 5(4) tableau
constexpr double kC2 = 1.0 / 5, kC3 = 3.0 / 10, kC4 = 4.0 / 5, kC5 = 8.0 / 9;
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187, kA53 = 64448.0 / 6561,
                 kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33, kA63 = 46732.0 / 5247,
                 kA64 = 49.0 / 176, kA65 = -5103.0 / 18656;
constexpr double kA71 = 35.0 / 384, kA73 = 500.0 / 1113, kA74 = 125.0 / 192,
                 kA75 = -2187.0 / 6784, kA76 = 11.0 / 84;
// y5 - y4 = h * sum e_i k_i
constexpr double kE1 = 71.0 / 57600, kE3 = -71.0 / 16695, kE4 = 71.0 / 1920,
                 kE5 = -17253.0 / 339200, kE6 = 22.0 / 525, kE7 = -1.0 / 40;
// dense-output weights
constexpr double kD1 = -12715105075.0 / 11282082432.0;
constexpr double kD3 = 87487479700.0 / 32700410799.0;
constexpr double kD4 = -10690763975.0 / 1880347072.0;
constexpr double kD5 = 701980252875.0 / 199316789632.0;
constexpr double kD6 = -1453857185.0 / 822651844.0;
constexpr double kD7 = 69997945.0 / 29380423.0;

using Vec3 = Eigen::Vector3d;

/// Continuous extension over one accepted step.
struct DenseSegment {
  double t0 = 0.0, h = 0.0;
  Vec3 r1, r2, r3, r4, r5;

  Vec3 eval(double theta) const {
    const double th1 = 1.0 - theta;
    return r1 + theta * (r2 + th1 * (r3 + theta * (r4 + th1 * r5)));
  }
};

struct StepResult {
  Vec3 y1;
  Vec3 k7;  // FSAL derivative at (t + h, y1)
  double error = 0.0;
  DenseSegment dense;
};

template <typename Rhs>
StepResult dopri5_step(const Rhs& rhs, double t, const Vec3& y, const Vec3& k1, double h) {
  const Vec3 k2 = rhs(t + kC2 * h, y + h * (kA21 * k1));
  const Vec3 k3 = rhs(t + kC3 * h, y + h * (kA31 * k1 + kA32 * k2));
  const Vec3 k4 = rhs(t + kC4 * h, y + h * (kA41 * k1 + kA42 * k2 + kA43 * k3));
  const Vec3 k5 =
      rhs(t + kC5 * h, y + h * (kA51 * k1 + kA52 * k2 + kA53 * k3 + kA54 * k4));
  const Vec3 k6 =
      rhs(t + h, y + h * (kA61 * k1 + kA62 * k2 + kA63 * k3 + kA64 * k4 + kA65 * k5));
  StepResult r;
  r.y1 = y + h * (kA71 * k1 + kA73 * k3 + kA74 * k4 + kA75 * k5 + kA76 * k6);
  r.k7 = rhs(t + h, r.y1);
  const Vec3 err =
      h * (kE1 * k1 + kE3 * k3 + kE4 * k4 + kE5 * k5 + kE6 * k6 + kE7 * r.k7);
  r.error = err.cwiseAbs().maxCoeff();

  const Vec3 ydiff = r.y1 - y;
  r.dense.t0 = t;
  r.dense.h = h;
  r.dense.r1 = y;
  r.dense.r2 = ydiff;
  r.dense.r3 = h * k1 - ydiff;
  r.dense.r4 = ydiff - h * r.k7 - r.dense.r3;
  r.dense.r5 =
      h * (kD1 * k1 + kD3 * k3 + kD4 * k4 + kD5 * k5 + kD6 * k6 + kD7 * r.k7);
  return r;
}

/// Bisection of z(theta) - L on the dense output; returns refined theta.
double refine_crossing(const DenseSegment& seg, double plane_L, double rel_tol) {
  double lo = 0.0, hi = 1.0;
  double g_lo = seg.eval(lo).z() - plane_L;
  const double tol = rel_tol * plane_L;
  if (std::abs(g_lo) <= tol) return lo;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double g = seg.eval(mid).z() - plane_L;
    if (std::abs(g) <= tol) return mid;
    if ((g < 0.0) == (g_lo < 0.0)) {
      lo = mid;
      g_lo = g;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct DetRhs {
  const StateTable& table;
  const SpinDirection& n_dir;
  double lambda;

  Vec3 operator()(double t, const Vec3& y) const {
    return velocity(table, t, y, n_dir, lambda);
  }
};

enum class RunMode { until_crossing, until_time };

/// Shared adaptive driver; `mode` selects first-crossing detection or plain
/// transport to t_end. On success out_y holds the final position.
ArrivalRecord dopri5_drive(const Vec3& x0, const SpinDirection& n_dir, double lambda,
                           const StateTable& table, double t_end,
                           const IntegratorOptions& opts, RunMode mode, Vec3* out_y) {
  const double plane_L = table.params().detector_plane_L;
  ArrivalRecord rec;

  if (mode == RunMode::until_crossing && x0.z() >= plane_L) {
    rec.status = ArrivalStatus::arrived;  // infimum convention: already there
    rec.t_arrival = 0.0;
    rec.crossing_xy = {x0.x(), x0.y()};
    return rec;
  }

  const DetRhs rhs{table, n_dir, lambda};
  const double h_min = 1e-14 * t_end;
  double t = table.t_begin();
  Vec3 y = x0;
  double h = 1e-3 * t_end;
  long steps = 0;

  Vec3 k1;
  try {
    k1 = rhs(t, y);
  } catch (const NodeSingularity&) {
    rec.status = ArrivalStatus::aborted_singularity;
    return rec;
  }

  while (t < t_end) {
    if (++steps > opts.max_steps) {
      rec.status = ArrivalStatus::aborted_step_limit;
      return rec;
    }
    h = std::min(h, t_end - t);

    StepResult step;
    bool singular = false;
    try {
      step = dopri5_step(rhs, t, y, k1, h);
    } catch (const NodeSingularity&) {
      singular = true;
    }
    if (singular) {
      h *= 0.5;
      if (h < h_min) {
        rec.status = ArrivalStatus::aborted_singularity;
        return rec;
      }
      continue;
    }

    if (step.error > opts.tol) {
      const double shrink =
          std::max(0.2, 0.9 * std::pow(opts.tol / step.error, 0.2));
      h *= shrink;
      if (h < h_min) {
        rec.status = ArrivalStatus::aborted_step_limit;
        return rec;
      }
      continue;
    }

    // accepted
    if (mode == RunMode::until_crossing) {
      const double g0 = y.z() - plane_L;
      const double g1 = step.y1.z() - plane_L;
      if ((g0 < 0.0 && g1 >= 0.0) || (g0 > 0.0 && g1 <= 0.0)) {
        const double theta = refine_crossing(step.dense, plane_L, opts.crossing_rel_tol);
        const Vec3 yc = step.dense.eval(theta);
        rec.status = ArrivalStatus::arrived;
        rec.t_arrival = t + theta * h;
        rec.crossing_xy = {yc.x(), yc.y()};
        return rec;
      }
    }

    t += h;
    y = step.y1;
    k1 = step.k7;  // FSAL

    const double grow = (step.error > 0.0)
                            ? std::min(5.0, 0.9 * std::pow(opts.tol / step.error, 0.2))
                            : 5.0;
    h *= grow;
  }

  rec.status = ArrivalStatus::censored;
  if (out_y) *out_y = y;
  return rec;
}

}  // namespace

ArrivalRecord integrate_trajectory(const Eigen::Vector3d& x0, const SpinDirection& n_dir,
                                   const DynamicsSpec& spec, const StateTable& table,
                                   double t_max, const IntegratorOptions& opts) {
  if (!spec.deterministic())
    throw ConfigError("integrate_trajectory requires a deterministic DynamicsSpec");
  return dopri5_drive(x0, n_dir, spec.lambda, table,
                      std::min(t_max, table.t_end()), opts, RunMode::until_crossing,
                      nullptr);
}

ArrivalRecord integrate_sde(const Eigen::Vector3d& x0, const SpinDirection& n_dir,
                            const DynamicsSpec& spec, const StateTable& table,
                            double t_max, double dt, std::uint64_t seed) {
  if (!(dt > 0.0)) throw ConfigError("integrate_sde requires dt > 0");
  const double plane_L = table.params().detector_plane_L;
  const double z_max = table.grid().z_max;
  const double t_end = std::min(t_max, table.t_end());

  ArrivalRecord rec;
  if (x0.z() >= plane_L) {
    rec.status = ArrivalStatus::arrived;
    rec.t_arrival = 0.0;
    rec.crossing_xy = {x0.x(), x0.y()};
    return rec;
  }

  Rng rng(seed);
  Eigen::Vector3d y = x0;
  double t = table.t_begin();
  while (t < t_end) {
    const double h = std::min(dt, t_end - t);
    Eigen::Vector3d drift;
    try {
      drift = stochastic_drift(table, t, y, n_dir, spec);
    } catch (const NodeSingularity&) {
      rec.status = ArrivalStatus::aborted_singularity;
      return rec;
    }
    Eigen::Vector3d y1 = y + h * drift;
    if (spec.diffusion_nu > 0.0)
      y1 += std::sqrt(2.0 * spec.diffusion_nu * h) * rng.normal3();

    // first-crossing check on the raw step segment
    const double g0 = y.z() - plane_L;
    const double g1 = y1.z() - plane_L;
    if ((g0 < 0.0 && g1 >= 0.0) || (g0 > 0.0 && g1 <= 0.0)) {
      const double theta = (g1 != g0) ? g0 / (g0 - g1) : 0.0;
      rec.status = ArrivalStatus::arrived;
      rec.t_arrival = t + theta * h;
      rec.crossing_xy = {y.x() + theta * (y1.x() - y.x()),
                         y.y() + theta * (y1.y() - y.y())};
      return rec;
    }

    // reflecting walls; the density vanishes quadratically at both, so these
    // moves are rare and preserve equivariance
    if (y1.z() < 0.0) y1.z() = -y1.z();
    if (y1.z() > z_max) y1.z() = 2.0 * z_max - y1.z();
    y1.z() = std::clamp(y1.z(), 0.0, z_max);

    y = y1;
    t += h;
  }
  rec.status = ArrivalStatus::censored;
  return rec;
}

Eigen::Vector3d transport_position(const Eigen::Vector3d& x0, const SpinDirection& n_dir,
                                   const DynamicsSpec& spec, const StateTable& table,
                                   double t_query, const IntegratorOptions& opts,
                                   double sde_dt, std::uint64_t seed) {
  if (spec.deterministic()) {
    Eigen::Vector3d y = x0;
    const ArrivalRecord rec = dopri5_drive(x0, n_dir, spec.lambda, table, t_query, opts,
                                           RunMode::until_time, &y);
    if (rec.aborted()) throw NodeSingularity("trajectory aborted during transport");
    return y;
  }
  // Euler-Maruyama transport without crossing events
  Rng rng(seed);
  Eigen::Vector3d y = x0;
  double t = table.t_begin();
  const double z_max = table.grid().z_max;
  while (t < t_query) {
    const double h = std::min(sde_dt, t_query - t);
    const Eigen::Vector3d drift = stochastic_drift(table, t, y, n_dir, spec);
    y += h * drift + std::sqrt(2.0 * spec.diffusion_nu * h) * rng.normal3();
    if (y.z() < 0.0) y.z() = -y.z();
    if (y.z() > z_max) y.z() = 2.0 * z_max - y.z();
    y.z() = std::clamp(y.z(), 0.0, z_max);
    t += h;
  }
  return y;
}

double EnsembleRun::aborted_fraction() const {
  if (records.empty()) return 0.0;
  long n = 0;
  for (const auto& r : records) n += r.aborted() ? 1 : 0;
  return static_cast<double>(n) / static_cast<double>(records.size());
}

double EnsembleRun::censored_fraction() const {
  if (records.empty()) return 0.0;
  long n = 0;
  for (const auto& r : records) n += (r.status == ArrivalStatus::censored) ? 1 : 0;
  return static_cast<double>(n) / static_cast<double>(records.size());
}

EnsembleRun run_ensemble(const StateTable& table, const WaveState& state0,
                         const PacketConfig& packet, const EnsembleConfig& cfg,
                         int workers) {
  cfg.spec.validate();
  if (cfg.n_trajectories < 1) throw ConfigError("n_trajectories must be >= 1");

  const std::vector<Eigen::Vector3d> x0s =
      sample_initial(cfg.n_trajectories, derive_seed(cfg.seed, 0), state0);
  const double t_max = table.t_end();
  const double sde_dt = cfg.sde_dt_fraction * t_max;

  EnsembleRun run;
  run.records.resize(x0s.size());
  run.seed = cfg.seed;
  run.n_trajectories = cfg.n_trajectories;
  run.spec = cfg.spec;
  run.n_dir = cfg.n_dir;
  run.params = table.params();
  run.packet = packet;

  parallel_for(x0s.size(), workers, [&](std::size_t i) {
    if (cfg.spec.deterministic()) {
      run.records[i] =
          integrate_trajectory(x0s[i], cfg.n_dir, cfg.spec, table, t_max, cfg.opts);
    } else {
      run.records[i] = integrate_sde(x0s[i], cfg.n_dir, cfg.spec, table, t_max, sde_dt,
                                     derive_seed(cfg.seed, i + 1));
    }
  });
  return run;
}

ArrivalDistribution arrival_distribution(const EnsembleRun& run, const TimeBinning& binning) {
  binning.validate();
  if (run.aborted_fraction() >= 0.01)
    throw TooManyAborts("more than 1% of trajectories aborted");

  ArrivalDistribution dist;
  dist.binning = binning;
  dist.mass.assign(binning.n_outcomes(), 0.0);
  dist.stderrs.assign(binning.n_outcomes(), 0.0);
  dist.label.n_dir = run.n_dir;
  dist.label.lambda = run.spec.lambda;
  dist.label.diffusion_nu = run.spec.diffusion_nu;
  dist.label.seed = run.seed;

  long n_used = 0;
  for (const auto& r : run.records) {
    if (r.aborted()) continue;
    ++n_used;
    const int k = r.arrived() ? binning.bin_of(r.t_arrival) : binning.censored_index();
    dist.mass[k] += 1.0;
  }
  if (n_used == 0) throw TooManyAborts("no usable records");
  for (int k = 0; k < binning.n_outcomes(); ++k) {
    const double p = dist.mass[k] / n_used;
    dist.mass[k] = p;
    dist.stderrs[k] = std::sqrt(p * (1.0 - p) / n_used);
  }
  dist.n_samples = n_used;
  return dist;
}

std::vector<AlphaSweepPoint> mean_vs_alpha(const StateTable& table, const WaveState& state0,
                                           const PacketConfig& packet,
                                           const std::vector<double>& alphas,
                                           const EnsembleConfig& base, int workers) {
  std::vector<AlphaSweepPoint> out;
  out.reserve(alphas.size());
  for (double alpha : alphas) {
    EnsembleConfig cfg = base;
    cfg.n_dir = SpinDirection::from_angles(alpha, 0.0);
    const EnsembleRun run = run_ensemble(table, state0, packet, cfg, workers);

    AlphaSweepPoint pt;
    pt.alpha = alpha;
    pt.censored_fraction = run.censored_fraction();
    double sum = 0.0;
    long n = 0;
    for (const auto& r : run.records) {
      if (!r.arrived()) continue;
      sum += r.t_arrival;
      ++n;
    }
    pt.n_used = n;
    pt.mean_t = (n > 0) ? sum / n : 0.0;
    double var = 0.0;
    for (const auto& r : run.records) {
      if (!r.arrived()) continue;
      var += (r.t_arrival - pt.mean_t) * (r.t_arrival - pt.mean_t);
    }
    pt.std_error = (n > 1) ? std::sqrt(var / (n - 1) / n) : 0.0;
    out.push_back(pt);
  }
  return out;
}

std::vector<Eigen::Vector3d> transport_positions(const StateTable& table,
                                                 const std::vector<Eigen::Vector3d>& x0s,
                                                 const SpinDirection& n_dir,
                                                 const DynamicsSpec& spec, double t_query,
                                                 const IntegratorOptions& opts,
                                                 double sde_dt, std::uint64_t seed,
                                                 int workers) {
  std::vector<std::optional<Eigen::Vector3d>> slots(x0s.size());
  parallel_for(x0s.size(), workers, [&](std::size_t i) {
    try {
      slots[i] = transport_position(x0s[i], n_dir, spec, table, t_query, opts, sde_dt,
                                    derive_seed(seed, i + 1));
    } catch (const NodeSingularity&) {
      slots[i] = std::nullopt;
    }
  });
  std::vector<Eigen::Vector3d> out;
  out.reserve(x0s.size());
  for (const auto& s : slots)
    if (s) out.push_back(*s);
  return out;
}

void write_records_csv(std::ostream& os, const EnsembleRun& run, bool header) {
  if (header) os << "index,t_arrival,x,y,status\n";
  for (std::size_t i = 0; i < run.records.size(); ++i) {
    const ArrivalRecord& r = run.records[i];
    os << i << ',';
    if (r.arrived())
      os << fmt_g(r.t_arrival) << ',' << fmt_g(r.crossing_xy.x()) << ','
         << fmt_g(r.crossing_xy.y());
    else
      os << ",,";
    os << ',' << to_string(r.status) << '\n';
  }
}

}  // namespace spintime
