#include "spintime/wavestate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "interp.hpp"
#include "spectral.hpp"
#include "spintime/textio.hpp"

namespace spintime {

using detail::hermite;

WaveState WaveState::init_packet(const PacketConfig& cfg, const LongitudinalGrid& grid,
                                 const PhysicalParams& params) {
  cfg.validate();
  grid.validate();
  params.validate();

  const int n = grid.n_points;
  const double dz = grid.dz();
  const double inv4d2 = 1.0 / (4.0 * cfg.width_d * cfg.width_d);
  const double k0 = cfg.p0 / params.hbar;

  // Gaussian minus its mirror image: enforces f(0) = 0 exactly.
  std::vector<cd> f(n);
  for (int j = 1; j <= n; ++j) {
    const double z = j * dz;
    const double gm = std::exp(-(z - cfg.z0) * (z - cfg.z0) * inv4d2);
    const double gp = std::exp(-(z + cfg.z0) * (z + cfg.z0) * inv4d2);
    f[j - 1] = gm * std::polar(1.0, k0 * z) - gp * std::polar(1.0, -k0 * z);
  }

  double norm2 = 0.0;
  for (const cd& v : f) norm2 += std::norm(v);
  norm2 *= dz;
  if (std::sqrt(norm2) < 1e-6)
    throw NonNormalizable("initial packet carries no mass after wall truncation");
  const double inv_norm = 1.0 / std::sqrt(norm2);
  for (cd& v : f) v *= inv_norm;

  detail::SineSynthesis syn(n);
  std::vector<cd> modes(n);
  syn.analyze(f, modes);
  return from_modes(std::move(modes), grid, params, 0.0);
}

WaveState WaveState::from_modes(std::vector<cd> modes, const LongitudinalGrid& grid,
                                const PhysicalParams& params, double time) {
  grid.validate();
  params.validate();
  if (static_cast<int>(modes.size()) != grid.n_points)
    throw ConfigError("mode vector size must equal grid.n_points");
  WaveState s;
  s.grid_ = grid;
  s.params_ = params;
  s.time_ = time;
  s.modes_ = std::move(modes);
  s.synthesize_nodes();
  return s;
}

void WaveState::synthesize_nodes() {
  const int n = grid_.n_points;
  detail::SineSynthesis syn(n);
  f_.resize(n + 2);
  df_.resize(n + 2);
  d2f_.resize(n + 2);
  syn.synthesize(modes_, grid_.domain_length(), 0, f_);
  syn.synthesize(modes_, grid_.domain_length(), 1, df_);
  syn.synthesize(modes_, grid_.domain_length(), 2, d2f_);
  max_abs2_f_ = 0.0;
  for (const cd& v : f_) max_abs2_f_ = std::max(max_abs2_f_, std::norm(v));
}

WaveState WaveState::evolved_to(double t) const {
  const double dt = t - time_;
  const double Z = grid_.domain_length();
  const double phase_scale = params_.hbar / (2.0 * params_.mass);
  std::vector<cd> modes(modes_.size());
  for (std::size_t k = 1; k <= modes_.size(); ++k) {
    const double kap = M_PI * static_cast<double>(k) / Z;
    modes[k - 1] = modes_[k - 1] * std::polar(1.0, -phase_scale * kap * kap * dt);
  }
  WaveState s = from_modes(std::move(modes), grid_, params_, t);
  s.check_domain();
  return s;
}

void WaveState::check_domain() const {
  if (mass_near_far_wall(10) > 1e-6)
    throw DomainTooSmall("wave mass reached the far wall; increase z_max");
}

double WaveState::norm() const {
  double s = 0.0;
  for (int j = 1; j <= grid_.n_points; ++j) s += std::norm(f_[j]);
  return std::sqrt(s * grid_.dz());
}

double WaveState::mass_near_far_wall(int bands) const {
  const int n = grid_.n_points;
  double s = 0.0;
  for (int j = std::max(1, n + 1 - bands); j <= n + 1; ++j) s += std::norm(f_[j]);
  return s * grid_.dz();
}

namespace {
struct BracketZ {
  int j;      // lower node of the interval
  double u;   // fractional position in [0, 1]
};

BracketZ bracket(const LongitudinalGrid& grid, double z) {
  if (!(z >= 0.0) || !(z <= grid.z_max))
    throw Error("z outside the grid domain [0, z_max]");
  const double dz = grid.dz();
  int j = static_cast<int>(z / dz);
  if (j > grid.n_points) j = grid.n_points;  // z == z_max edge
  return {j, z / dz - j};
}
}  // namespace

cd WaveState::f_at(double z) const {
  const auto [j, u] = bracket(grid_, z);
  return hermite(f_[j], df_[j], f_[j + 1], df_[j + 1], grid_.dz(), u);
}

cd WaveState::df_at(double z) const {
  const auto [j, u] = bracket(grid_, z);
  return hermite(df_[j], d2f_[j], df_[j + 1], d2f_[j + 1], grid_.dz(), u);
}

double WaveState::transverse_density(double x, double y) const {
  const double a = params_.mass * params_.omega / params_.hbar;
  return (a / M_PI) * std::exp(-a * (x * x + y * y));
}

double WaveState::max_rho() const {
  const double a = params_.mass * params_.omega / params_.hbar;
  return (a / M_PI) * max_abs2_f_;
}

Density density_from_f(const PhysicalParams& params, double x, double y, cd f, cd df,
                       double rho_floor) {
  const double a = params.mass * params.omega / params.hbar;
  const double chi2 = (a / M_PI) * std::exp(-a * (x * x + y * y));
  const double abs2 = std::norm(f);
  Density d;
  d.rho = chi2 * abs2;
  if (d.rho < rho_floor)
    throw NodeSingularity("density below the node floor at the query point");
  const double cross = 2.0 * (std::conj(f) * df).real();
  d.grad_rho = {-2.0 * a * x * d.rho, -2.0 * a * y * d.rho, chi2 * cross};
  d.conv_velocity_z = (params.hbar / params.mass) * (std::conj(f) * df).imag() / abs2;
  return d;
}

Density WaveState::rho_and_grad(double x, double y, double z) const {
  return density_from_f(params_, x, y, f_at(z), df_at(z), rho_floor());
}

FluxReport flux_on_plane(const WaveState& state, const SpinDirection& n_dir, double lambda,
                         std::span<const double> t_samples,
                         std::span<const Eigen::Vector2d> xy_samples) {
  const PhysicalParams& p = state.params();
  const double L = p.detector_plane_L;
  const double a = p.mass * p.omega / p.hbar;

  FluxReport rep;
  rep.min_flux = std::numeric_limits<double>::infinity();
  long n_neg = 0;
  for (double t : t_samples) {
    const WaveState st = state.evolved_to(t);
    const cd f = st.f_at(L);
    const cd df = st.df_at(L);
    const double conv = (p.hbar / p.mass) * (std::conj(f) * df).imag();
    const double abs2 = std::norm(f);
    for (const Eigen::Vector2d& xy : xy_samples) {
      const double chi2 = (a / M_PI) * std::exp(-a * xy.squaredNorm());
      // (grad rho x n)_z = d_x rho n_y - d_y rho n_x with d_x rho = -2 a x rho
      const double spin =
          -lambda * p.omega * (xy.x() * n_dir.n.y() - xy.y() * n_dir.n.x()) * abs2;
      const double jz = chi2 * (conv + spin);
      ++rep.n_samples;
      if (jz < 0.0) ++n_neg;
      if (jz < rep.min_flux) {
        rep.min_flux = jz;
        rep.min_t = t;
        rep.min_xy = xy;
      }
    }
  }
  rep.negative_fraction =
      rep.n_samples > 0 ? static_cast<double>(n_neg) / rep.n_samples : 0.0;
  return rep;
}

void write_snapshot_csv(std::ostream& os, const WaveState& state, bool header) {
  if (header) os << "t,z,re_f,im_f\n";
  const auto f = state.f_nodes();
  for (int j = 0; j < static_cast<int>(f.size()); ++j) {
    os << fmt_g(state.time()) << ',' << fmt_g(state.grid().node(j)) << ','
       << fmt_g(f[j].real()) << ',' << fmt_g(f[j].imag()) << '\n';
  }
}

}  // namespace spintime
