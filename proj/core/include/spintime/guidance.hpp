#pragma once

#include <Eigen/Dense>

#include "spintime/params.hpp"
#include "spintime/spin.hpp"
#include "spintime/state_table.hpp"
#include "spintime/wavestate.hpp"

namespace spintime {

/// Which member of the equivariant dynamics family to integrate.
/// diffusion_nu = 0 is the deterministic lambda-family; nu > 0 adds isotropic
/// diffusion with osmotic drift nu * grad(rho)/rho, which leaves |psi|^2
/// equivariant for every nu.
struct DynamicsSpec {
  double lambda = 0.0;
  double diffusion_nu = 0.0;

  bool deterministic() const { return diffusion_nu == 0.0; }

  void validate() const {
    if (!(diffusion_nu >= 0.0)) throw ConfigError("diffusion_nu must be >= 0");
  }
};

/// v = (0, 0, v_conv) + lambda (hbar/2m) (grad rho x n) / rho.
/// For product states the spin vector density is rho * n, so the curl term of
/// the guidance law reduces to grad(rho) x n.
Eigen::Vector3d velocity(const Density& local, const SpinDirection& n_dir, double lambda,
                         const PhysicalParams& params);

Eigen::Vector3d velocity(const WaveState& state, const Eigen::Vector3d& pos,
                         const SpinDirection& n_dir, double lambda);

Eigen::Vector3d velocity(const StateTable& table, double t, const Eigen::Vector3d& pos,
                         const SpinDirection& n_dir, double lambda);

/// velocity(...) + nu * grad(rho)/rho, to be paired with Gaussian increments
/// of variance 2 nu dt per axis.
Eigen::Vector3d stochastic_drift(const Density& local, const SpinDirection& n_dir,
                                 const DynamicsSpec& spec, const PhysicalParams& params);

Eigen::Vector3d stochastic_drift(const StateTable& table, double t,
                                 const Eigen::Vector3d& pos, const SpinDirection& n_dir,
                                 const DynamicsSpec& spec);

}  // namespace spintime
