#pragma once

// Internal: cubic interpolation kernels shared by WaveState and StateTable.

#include <complex>

namespace spintime::detail {

using cd = std::complex<double>;

/// Cubic Hermite on [0, h] with endpoint values y and slopes m; u = s/h.
inline cd hermite(cd y0, cd m0, cd y1, cd m1, double h, double u) {
  const double u2 = u * u, u3 = u2 * u;
  const double h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
  const double h10 = u3 - 2.0 * u2 + u;
  const double h01 = -2.0 * u3 + 3.0 * u2;
  const double h11 = u3 - u2;
  return h00 * y0 + (h10 * h) * m0 + h01 * y1 + (h11 * h) * m1;
}

/// Value at u (in node spacings, nodes at u = 0,1,2,3) of the cubic through
/// four equally spaced samples.
inline cd lagrange4(const cd y[4], double u) {
  const double a = u, b = u - 1.0, c = u - 2.0, d = u - 3.0;
  const double w0 = -(b * c * d) / 6.0;
  const double w1 = (a * c * d) / 2.0;
  const double w2 = -(a * b * d) / 2.0;
  const double w3 = (a * b * c) / 6.0;
  return w0 * y[0] + w1 * y[1] + w2 * y[2] + w3 * y[3];
}

}  // namespace spintime::detail
