#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spintime/errors.hpp"
#include "spintime/spin.hpp"

namespace spintime {

/// A finite-dimensional quantum experiment: system of dimension d_sys coupled
/// to an apparatus of dimension d_app through a unitary on the composite, with
/// an apparatus ready state and a calibration map from composite basis index
/// to outcome label. Composite index q = s * d_app + a (system-major).
struct FiniteExperiment {
  int d_sys = 2;
  int d_app = 2;
  Eigen::MatrixXcd unitary;      ///< (d_sys*d_app) x (d_sys*d_app)
  Eigen::VectorXcd ready_state;  ///< d_app, normalized
  std::vector<int> calibration;  ///< size d_sys*d_app, values in [0, n_outcomes)

  int dim() const { return d_sys * d_app; }
  int n_outcomes() const;

  /// Throws NonUnitary / ConfigError when the invariants fail.
  void validate(double tol = 1e-10) const;
};

/// The system-side POVM of an experiment: one positive matrix per outcome,
/// summing to the identity.
struct ExtractedPOVM {
  std::vector<Eigen::MatrixXcd> effects;

  /// Smallest eigenvalue across all effects (>= -1e-10 for validity).
  double min_eigenvalue() const;
  /// Deviation ||sum effects - I||_max.
  double completeness_defect() const;
  void validate(double tol = 1e-10) const;
};

/// E(label) = <Phi_0| U^dag P(F^{-1}(label)) U |Phi_0> with the partial inner
/// product over apparatus indices and P the composite-basis projection.
ExtractedPOVM extract_povm(const FiniteExperiment& exp);

/// Evolve psi x Phi_0 by U, square amplitudes, push through the calibration.
std::vector<double> born_outcome_dist(const FiniteExperiment& exp,
                                      const Eigen::VectorXcd& psi);

/// For an experiment whose system factors as spin x rest (d_sys = 2 * d_rest)
/// and whose unitary must commute with sigma_a x I (a = x, y, z): returns the
/// maximum pairwise total variation of the outcome distributions over the
/// states |n> x phi for n in n_list. Throws NotDecoupled if the commutation
/// check fails.
double decoupling_check(const FiniteExperiment& exp, std::span<const SpinDirection> n_list,
                        const Eigen::VectorXcd& phi_rest);

/// Sectioned plain-text experiment files:
///   [experiment] d_sys, d_app
///   [unitary]    dim rows of 2*dim numbers (re im per entry, row-major)
///   [ready_state] d_app rows "re im"
///   [calibration] rows "index label"
FiniteExperiment read_experiment(std::istream& is);
FiniteExperiment read_experiment_file(const std::string& path);
void write_experiment(std::ostream& os, const FiniteExperiment& exp);

}  // namespace spintime
