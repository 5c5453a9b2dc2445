#include "spintime/guidance.hpp"

namespace spintime {

Eigen::Vector3d velocity(const Density& local, const SpinDirection& n_dir, double lambda,
                         const PhysicalParams& params) {
  Eigen::Vector3d v{0.0, 0.0, local.conv_velocity_z};
  if (lambda != 0.0) {
    const double c = lambda * params.hbar / (2.0 * params.mass * local.rho);
    v += c * local.grad_rho.cross(n_dir.n);
  }
  return v;
}

Eigen::Vector3d velocity(const WaveState& state, const Eigen::Vector3d& pos,
                         const SpinDirection& n_dir, double lambda) {
  return velocity(state.rho_and_grad(pos.x(), pos.y(), pos.z()), n_dir, lambda,
                  state.params());
}

Eigen::Vector3d velocity(const StateTable& table, double t, const Eigen::Vector3d& pos,
                         const SpinDirection& n_dir, double lambda) {
  return velocity(table.rho_and_grad(t, pos.x(), pos.y(), pos.z()), n_dir, lambda,
                  table.params());
}

Eigen::Vector3d stochastic_drift(const Density& local, const SpinDirection& n_dir,
                                 const DynamicsSpec& spec, const PhysicalParams& params) {
  Eigen::Vector3d v = velocity(local, n_dir, spec.lambda, params);
  if (spec.diffusion_nu != 0.0) v += (spec.diffusion_nu / local.rho) * local.grad_rho;
  return v;
}

Eigen::Vector3d stochastic_drift(const StateTable& table, double t,
                                 const Eigen::Vector3d& pos, const SpinDirection& n_dir,
                                 const DynamicsSpec& spec) {
  return stochastic_drift(table.rho_and_grad(t, pos.x(), pos.y(), pos.z()), n_dir, spec,
                          table.params());
}

}  // namespace spintime
