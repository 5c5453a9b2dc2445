#pragma once

#include <complex>

#include <Eigen/Dense>

namespace spintime {

/// A spin orientation: unit 3-vector plus its spherical angles.
/// alpha in [0, pi] is the angle against the z-axis, beta in [0, 2pi) the
/// azimuth of (n_x, n_y). The three fields are kept mutually consistent.
struct SpinDirection {
  Eigen::Vector3d n{0.0, 0.0, 1.0};
  double alpha = 0.0;
  double beta = 0.0;

  /// Builds from angles. alpha is folded into [0, pi] (an angle against an
  /// axis has no sign or winding), beta into [0, 2pi).
  static SpinDirection from_angles(double alpha, double beta = 0.0);

  /// Builds from a 3-vector (normalized internally; must be nonzero).
  static SpinDirection from_vector(const Eigen::Vector3d& v);

  static SpinDirection plus_z() { return from_vector({0, 0, 1}); }
  static SpinDirection minus_z() { return from_vector({0, 0, -1}); }
  static SpinDirection plus_x() { return from_vector({1, 0, 0}); }
  static SpinDirection minus_x() { return from_vector({-1, 0, 0}); }
  static SpinDirection plus_y() { return from_vector({0, 1, 0}); }
  static SpinDirection minus_y() { return from_vector({0, -1, 0}); }

  SpinDirection opposite() const { return from_vector(-n); }
};

/// Normalized state in C^2, |up|^2 + |down|^2 = 1.
struct Spinor {
  std::complex<double> up{1.0, 0.0};
  std::complex<double> down{0.0, 0.0};

  double norm() const { return std::sqrt(std::norm(up) + std::norm(down)); }
};

/// (cos(alpha/2), sin(alpha/2) e^{i beta}); overall phase fixed to 1, so that
/// <n|sigma|n> = n with the standard Pauli matrices.
Spinor spinor_from_direction(const SpinDirection& dir);

/// Pauli expectation <s|sigma|s> as a unit vector. Round-trips with
/// spinor_from_direction up to the spinor's unobservable phase.
SpinDirection direction_from_spinor(const Spinor& s);

}  // namespace spintime
