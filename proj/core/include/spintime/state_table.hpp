#pragma once

#include <vector>

#include "spintime/wavestate.hpp"

namespace spintime {

/// Read-only table of wave snapshots on a uniform time grid, queried by many
/// trajectory workers concurrently.
///
/// Each snapshot stores f, d_z f and their exact time derivatives at every
/// node, so queries between snapshots use cubic Hermite interpolation in time
/// followed by cubic interpolation in z. At construction the table checks its
/// own interpolation against exact re-propagation at interval midpoints and
/// keeps doubling the snapshot count until the error is below `tol`.
class StateTable {
 public:
  struct Options {
    int initial_snapshots = 129;  ///< snapshot count (intervals + 1)
    int max_snapshots = 4097;
    double tol = 1e-6;  ///< max |interp - exact| relative to max |f|
  };

  StateTable(const WaveState& initial, double t_max) : StateTable(initial, t_max, Options{}) {}
  StateTable(const WaveState& initial, double t_max, Options opt);

  struct Field {
    cd f;
    cd df;
  };

  /// f and d_z f at (t, z); t clamped to the table range within 1e-9.
  Field field(double t, double z) const;

  /// Density data at (t, x, y, z); throws NodeSingularity below rho_floor().
  Density rho_and_grad(double t, double x, double y, double z) const;

  double t_begin() const { return t0_; }
  double t_end() const { return t0_ + t_span_; }
  int n_snapshots() const { return static_cast<int>(times_.size()); }
  double validated_error() const { return validated_error_; }

  const LongitudinalGrid& grid() const { return grid_; }
  const PhysicalParams& params() const { return params_; }

  double max_rho() const;
  double rho_floor() const { return 1e-12 * max_rho(); }

 private:
  void build(const WaveState& initial, int n_snapshots);
  double midpoint_error(const WaveState& initial) const;

  LongitudinalGrid grid_;
  PhysicalParams params_;
  double t0_ = 0.0;
  double t_span_ = 0.0;
  double dt_ = 0.0;
  double validated_error_ = 0.0;
  double max_abs2_f_ = 0.0;

  std::vector<double> times_;
  // per snapshot, node arrays of length n_points + 2
  std::vector<std::vector<cd>> f_, fp_, ft_, fpt_;
};

}  // namespace spintime
