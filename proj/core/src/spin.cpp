#include "spintime/spin.hpp"

#include <cmath>

#include "spintime/errors.hpp"

namespace spintime {

SpinDirection SpinDirection::from_angles(double alpha, double beta) {
  const double two_pi = 2.0 * M_PI;
  double a = std::fmod(alpha, two_pi);
  if (a < 0.0) a += two_pi;
  if (a > M_PI) a = two_pi - a;
  double b = std::fmod(beta, two_pi);
  if (b < 0.0) b += two_pi;

  SpinDirection d;
  d.alpha = a;
  d.beta = b;
  d.n = {std::sin(a) * std::cos(b), std::sin(a) * std::sin(b), std::cos(a)};
  return d;
}

SpinDirection SpinDirection::from_vector(const Eigen::Vector3d& v) {
  const double len = v.norm();
  if (!(len > 0.0)) throw ConfigError("spin direction must be a nonzero vector");
  SpinDirection d;
  d.n = v / len;
  const double rho_xy = std::hypot(d.n.x(), d.n.y());
  d.alpha = std::atan2(rho_xy, d.n.z());
  d.beta = (rho_xy == 0.0) ? 0.0 : std::atan2(d.n.y(), d.n.x());
  if (d.beta < 0.0) d.beta += 2.0 * M_PI;
  return d;
}

Spinor spinor_from_direction(const SpinDirection& dir) {
  // phase of the down component chosen so that <n|sigma|n> = n with the
  // standard Pauli matrices; overall phase fixed to 1
  const double half = 0.5 * dir.alpha;
  return Spinor{
      std::complex<double>(std::cos(half), 0.0),
      std::polar(std::sin(half), dir.beta),
  };
}

SpinDirection direction_from_spinor(const Spinor& s) {
  const std::complex<double> cross = std::conj(s.up) * s.down;
  const Eigen::Vector3d n{
      2.0 * cross.real(),
      2.0 * cross.imag(),
      std::norm(s.up) - std::norm(s.down),
  };
  return SpinDirection::from_vector(n);
}

}  // namespace spintime
