#pragma once

#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "spintime/binning.hpp"
#include "spintime/family.hpp"
#include "spintime/spin.hpp"

namespace spintime {

/// Binned spin POVM on C^2: outcome k carries the effect
/// E_k = e0[k] I + e_vec[k] . sigma. Positivity of every effect is
/// |e_vec| <= e0; normalization is sum e0 = 1 and sum e_vec = 0.
/// The censored bin is an ordinary outcome (index n_bins).
struct SpinPOVM {
  TimeBinning binning;
  std::vector<double> e0;
  std::vector<Eigen::Vector3d> e_vec;

  int n_outcomes() const { return binning.n_outcomes(); }

  /// Checks the invariants; `slack` loosens the per-bin positivity check
  /// (useful when reporting fitted POVMs before projection).
  void validate(double tol = 1e-10, double slack = 0.0) const;

  /// Mean-time moments (tau_0, tau_z) over non-censored bin midpoints.
  std::pair<double, double> time_moments() const;
};

/// Per-bin mass e0[k] + e_vec[k].n — a probability distribution whenever the
/// POVM invariants hold.
ArrivalDistribution predict(const SpinPOVM& povm, const SpinDirection& n_dir);

/// Total variation 0.5 * sum_k |p_k - q_k|. Throws BinningMismatch.
double tv_distance(const ArrivalDistribution& p, const ArrivalDistribution& q);

/// TV between (P+ + P-)/2 and (Q+ + Q-)/2. Zero (up to noise) is necessary
/// for the four distributions to come from one spin POVM.
double trace_pair_residual(const ArrivalDistribution& p_plus,
                           const ArrivalDistribution& p_minus,
                           const ArrivalDistribution& q_plus,
                           const ArrivalDistribution& q_minus);

struct FitReport {
  SpinPOVM povm;
  double residual_unconstrained = 0.0;
  double residual_projected = 0.0;
  std::vector<double> per_bin_violation;  ///< cone violation before projection
  double noise_floor = 0.0;               ///< RSS of input Monte Carlo errors
};

/// Axially symmetric construction E_k = P_x,k (I - sigma_z) + P_z,k sigma_z.
/// Feasible iff both eigenvalues {P_z,k, 2 P_x,k - P_z,k} are >= 0; the
/// violation list holds max(0, P_z,k - 2 P_x,k).
FitReport fit_axial(const ArrivalDistribution& p_x, const ArrivalDistribution& p_z);

/// Per-bin least squares of p_{j,k} ~ e0_k + e_vec_k . n_j over the given
/// directions (closed form via the normal equations; minimum-norm solution if
/// the design is rank-deficient), then projection onto the positivity cone by
/// radial shrinkage of e_vec at fixed e0, then renormalization of the totals.
FitReport fit_spin_povm(std::span<const SpinDirection> directions,
                        std::span<const ArrivalDistribution> dists);

/// (max_dev, bound): max over {z,-z,x,-x} of TV(P_n, predict(fitted, n))
/// versus TV(P_x, P_z)/2. Whenever the +/- symmetries hold in the data, no
/// spin POVM can have max_dev below the bound. Throws MissingDirection.
std::pair<double, double> deviation_lower_bound(const DistributionFamily& family,
                                                const SpinPOVM& fitted);

struct SinusoidFit {
  double tau0 = 0.0;
  double tau_z = 0.0;
  double chi2 = 0.0;
  int dof = 0;
};

/// Weighted least squares of means against tau0 + tau_z cos(alpha).
/// Throws DegenerateDesign if all cos(alpha) coincide.
SinusoidFit fit_sinusoidal_mean(std::span<const double> alphas,
                                std::span<const double> means,
                                std::span<const double> errors);

/// CSV export/import: rows (bin, t_lo, t_hi, e0, ex, ey, ez); the censored
/// row carries t_lo = t_max and an empty t_hi.
void write_povm_csv(std::ostream& os, const SpinPOVM& povm, bool header = true);
SpinPOVM read_povm_csv(std::istream& is);

/// Structured plain-text fit report.
void write_fit_report(std::ostream& os, const FitReport& report, const std::string& title);

}  // namespace spintime
