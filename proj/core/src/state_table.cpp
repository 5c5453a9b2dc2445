#include "spintime/state_table.hpp"

#include <algorithm>
#include <cmath>

#include "interp.hpp"
#include "spectral.hpp"

namespace spintime {

using detail::hermite;
using detail::lagrange4;

StateTable::StateTable(const WaveState& initial, double t_max, Options opt) {
  if (!(t_max > 0.0)) throw ConfigError("state table t_max must be > 0");
  grid_ = initial.grid();
  params_ = initial.params();
  t0_ = initial.time();
  t_span_ = t_max;

  int n_snap = std::max(2, opt.initial_snapshots);
  for (;;) {
    build(initial, n_snap);
    validated_error_ = midpoint_error(initial);
    if (validated_error_ <= opt.tol || n_snap >= opt.max_snapshots) break;
    n_snap = std::min(opt.max_snapshots, 2 * (n_snap - 1) + 1);
  }
  if (validated_error_ > opt.tol)
    throw Error("state table failed to reach interpolation tolerance at max snapshots");
}

void StateTable::build(const WaveState& initial, int n_snapshots) {
  const int n = grid_.n_points;
  const double Z = grid_.domain_length();
  const double mu = params_.hbar / (2.0 * params_.mass);  // d_t f = i mu f''

  times_.assign(n_snapshots, 0.0);
  f_.assign(n_snapshots, {});
  fp_.assign(n_snapshots, {});
  ft_.assign(n_snapshots, {});
  fpt_.assign(n_snapshots, {});
  dt_ = t_span_ / (n_snapshots - 1);
  max_abs2_f_ = 0.0;

  detail::SineSynthesis syn(n);
  std::vector<cd> modes(n);
  std::vector<cd> buf(n + 2);
  for (int s = 0; s < n_snapshots; ++s) {
    const double t = t0_ + s * dt_;
    times_[s] = t;
    const WaveState snap = initial.evolved_to(t);  // also runs the far-wall guard
    modes.assign(snap.modes().begin(), snap.modes().end());

    f_[s].assign(snap.f_nodes().begin(), snap.f_nodes().end());
    fp_[s].assign(snap.df_nodes().begin(), snap.df_nodes().end());

    // d_t f = i mu f''; f'' node values are already on the snapshot
    ft_[s].resize(n + 2);
    for (int j = 0; j < n + 2; ++j) ft_[s][j] = cd(0.0, mu) * snap.d2f_nodes()[j];

    // d_t f' = i mu f''' (cosine series)
    syn.synthesize(modes, Z, 3, buf);
    fpt_[s].resize(n + 2);
    for (int j = 0; j < n + 2; ++j) fpt_[s][j] = cd(0.0, mu) * buf[j];

    for (const cd& v : f_[s]) max_abs2_f_ = std::max(max_abs2_f_, std::norm(v));
  }
}

double StateTable::midpoint_error(const WaveState& initial) const {
  const int n_intervals = static_cast<int>(times_.size()) - 1;
  const int n_checks = std::min(n_intervals, 8);
  const double f_scale = std::sqrt(max_abs2_f_);
  double worst = 0.0;
  for (int c = 0; c < n_checks; ++c) {
    const int s = (n_intervals - 1) * c / std::max(1, n_checks - 1);
    const double t_mid = times_[s] + 0.5 * dt_;
    const WaveState exact = initial.evolved_to(t_mid);
    for (int j = 0; j < grid_.n_points + 2; ++j) {
      const cd fi = hermite(f_[s][j], ft_[s][j], f_[s + 1][j], ft_[s + 1][j], dt_, 0.5);
      worst = std::max(worst, std::abs(fi - exact.f_nodes()[j]) / f_scale);
    }
  }
  return worst;
}

StateTable::Field StateTable::field(double t, double z) const {
  // clamp tiny numerical overshoot at the range ends
  const double eps = 1e-9 * (std::abs(t_span_) + 1.0);
  if (t < t0_ - eps || t > t0_ + t_span_ + eps)
    throw Error("time outside the state table range");
  t = std::clamp(t, t0_, t0_ + t_span_);
  if (!(z >= 0.0) || z > grid_.z_max)
    throw Error("z outside the grid domain [0, z_max]");

  int s = static_cast<int>((t - t0_) / dt_);
  s = std::clamp(s, 0, static_cast<int>(times_.size()) - 2);
  const double th = (t - times_[s]) / dt_;

  const double dz = grid_.dz();
  int j = static_cast<int>(z / dz);
  j = std::clamp(j, 0, grid_.n_points);
  const double u = z / dz - j;

  // stencil of four nodes around the interval, one-sided at the walls
  const int base = std::clamp(j - 1, 0, grid_.n_points - 2);

  cd fp_nodes[4];
  for (int m = 0; m < 4; ++m) {
    const int node = base + m;
    fp_nodes[m] = hermite(fp_[s][node], fpt_[s][node], fp_[s + 1][node],
                          fpt_[s + 1][node], dt_, th);
  }
  const cd fj = hermite(f_[s][j], ft_[s][j], f_[s + 1][j], ft_[s + 1][j], dt_, th);
  const cd fj1 =
      hermite(f_[s][j + 1], ft_[s][j + 1], f_[s + 1][j + 1], ft_[s + 1][j + 1], dt_, th);

  Field out;
  out.f = hermite(fj, fp_nodes[j - base], fj1, fp_nodes[j + 1 - base], dz, u);
  out.df = lagrange4(fp_nodes, (z / dz) - base);
  return out;
}

Density StateTable::rho_and_grad(double t, double x, double y, double z) const {
  const Field fld = field(t, z);
  return density_from_f(params_, x, y, fld.f, fld.df, rho_floor());
}

double StateTable::max_rho() const {
  const double a = params_.mass * params_.omega / params_.hbar;
  return (a / M_PI) * max_abs2_f_;
}

}  // namespace spintime
