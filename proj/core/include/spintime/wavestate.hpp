#pragma once

#include <complex>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "spintime/errors.hpp"
#include "spintime/params.hpp"
#include "spintime/spin.hpp"

namespace spintime {

using cd = std::complex<double>;

/// Gaussian packet parameters for the longitudinal factor. The packet is
/// antisymmetrized against the wall at z = 0, so keep the center a few widths
/// away from it (wall_separation_ok) or the nominal shape gets truncated.
struct PacketConfig {
  double z0 = 2.0;       ///< packet center, > 0
  double width_d = 0.5;  ///< Gaussian width parameter d
  double p0 = 0.0;       ///< mean momentum toward +z, >= 0

  bool wall_separation_ok() const { return z0 - 3.0 * width_d > 0.0; }

  void validate() const {
    if (!(z0 > 0.0)) throw ConfigError("packet z0 must be > 0");
    if (!(width_d > 0.0)) throw ConfigError("packet width_d must be > 0");
    if (!(p0 >= 0.0)) throw ConfigError("packet p0 must be >= 0");
  }
};

/// Uniform grid on the half-line. Nodes sit at z_j = j*dz for j = 0..n_points+1
/// with hard Dirichlet walls at z = 0 and z = z_max + dz; the sine basis of the
/// solver vanishes at both.
struct LongitudinalGrid {
  double z_max = 8.0;
  int n_points = 4096;

  double dz() const { return z_max / n_points; }
  double domain_length() const { return z_max + dz(); }  // sine-basis length
  double node(int j) const { return j * dz(); }

  void validate() const {
    if (!(z_max > 0.0)) throw ConfigError("grid z_max must be > 0");
    if (n_points < 8) throw ConfigError("grid n_points must be >= 8");
  }
};

/// Local density data at a point, for the guidance laws.
/// conv_velocity_z is (hbar/m) Im(d_z f / f); the transverse convective
/// velocity vanishes identically (real transverse mode) and is not carried.
struct Density {
  double rho = 0.0;
  Eigen::Vector3d grad_rho{0.0, 0.0, 0.0};
  double conv_velocity_z = 0.0;
};

/// Separable wave function chi0(x,y) * f_t(z) at a fixed time. The transverse
/// factor is the analytic trap ground mode; the longitudinal factor is held as
/// sine-basis coefficients plus synthesized node values of f, f', f''.
///
/// Evolution is exact in time: each sine mode only picks up its phase, so the
/// only discretization error is the spatial truncation of the initial packet.
class WaveState {
 public:
  /// Antisymmetrized Gaussian at t = 0, normalized on the grid.
  /// Throws NonNormalizable if almost no mass survives the wall truncation.
  static WaveState init_packet(const PacketConfig& cfg, const LongitudinalGrid& grid,
                               const PhysicalParams& params);

  /// State from sine-mode coefficients (modes[k-1] multiplies sin(k pi z / Z)).
  static WaveState from_modes(std::vector<cd> modes, const LongitudinalGrid& grid,
                              const PhysicalParams& params, double time = 0.0);

  /// Exact propagation to absolute time t (mode k phase exp(-i hbar kappa_k^2
  /// (t - time())/2m)); the transverse factor contributes only the global
  /// ground-state phase exp(-i omega t), which drops out of every density and
  /// velocity. Throws DomainTooSmall if mass has reached the far wall.
  WaveState evolved_to(double t) const;

  double time() const { return time_; }
  const LongitudinalGrid& grid() const { return grid_; }
  const PhysicalParams& params() const { return params_; }

  /// Node arrays indexed j = 0..n_points+1 (z = j*dz), walls included.
  std::span<const cd> f_nodes() const { return f_; }
  std::span<const cd> df_nodes() const { return df_; }
  std::span<const cd> d2f_nodes() const { return d2f_; }
  std::span<const cd> modes() const { return modes_; }

  /// sqrt(sum |f_j|^2 dz) over interior nodes.
  double norm() const;

  /// Probability mass on the `bands` nodes nearest the far wall.
  double mass_near_far_wall(int bands = 10) const;

  /// Cubic Hermite interpolation of f and d_z f between nodes.
  cd f_at(double z) const;
  cd df_at(double z) const;

  /// |chi0(x,y)|^2, the analytic transverse ground-state density.
  double transverse_density(double x, double y) const;

  /// rho, grad rho and the longitudinal convective velocity at a point.
  /// Throws NodeSingularity when rho < rho_floor().
  Density rho_and_grad(double x, double y, double z) const;

  double max_rho() const;
  double rho_floor() const { return 1e-12 * max_rho(); }

 private:
  WaveState() = default;
  void synthesize_nodes();
  void check_domain() const;

  LongitudinalGrid grid_;
  PhysicalParams params_;
  double time_ = 0.0;
  std::vector<cd> modes_;          // size n_points
  std::vector<cd> f_, df_, d2f_;   // size n_points + 2
  double max_abs2_f_ = 0.0;
};

/// Evaluates f and d_z f at (x, y, z) given the interpolated longitudinal
/// values; shared by WaveState and StateTable.
Density density_from_f(const PhysicalParams& params, double x, double y, cd f, cd df,
                       double rho_floor);

/// Outward flux diagnostics on the plane z = detector_plane_L.
struct FluxReport {
  double min_flux = 0.0;
  double min_t = 0.0;
  Eigen::Vector2d min_xy{0.0, 0.0};
  double negative_fraction = 0.0;
  long n_samples = 0;
};

/// Evaluates z.j(t,x,y,L) = (hbar/m) |chi0|^2 Im(conj(f) d_z f)
///                        + lambda (hbar/2m) (grad rho x n)_z
/// over the given time and transverse sample sets.
FluxReport flux_on_plane(const WaveState& state, const SpinDirection& n_dir, double lambda,
                         std::span<const double> t_samples,
                         std::span<const Eigen::Vector2d> xy_samples);

/// Appends rows "t,z,Re f,Im f" for every node of the snapshot.
void write_snapshot_csv(std::ostream& os, const WaveState& state, bool header = true);

}  // namespace spintime
