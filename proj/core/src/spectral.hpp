#pragma once

// Internal: FFTW-backed synthesis of sine-series node values and derivatives.
// Not installed; only wavestate.cpp and state_table.cpp use this.

#include <complex>
#include <span>
#include <vector>

namespace spintime::detail {

using cd = std::complex<double>;

/// Transforms between sine-basis coefficients and node values on a grid with
/// n interior nodes (Dirichlet walls at j = 0 and j = n+1).
///
/// With Z the basis length and kappa_k = pi k / Z:
///   f(z_j)    = sum_k c_k sin(kappa_k z_j)               (DST-I)
///   f'(z_j)   = sum_k c_k kappa_k cos(kappa_k z_j)       (DCT-I, walls included)
///   f''(z_j)  = -sum_k c_k kappa_k^2 sin(kappa_k z_j)
///   f'''(z_j) = -sum_k c_k kappa_k^3 cos(kappa_k z_j)
class SineSynthesis {
 public:
  explicit SineSynthesis(int n_interior);
  ~SineSynthesis();
  SineSynthesis(const SineSynthesis&) = delete;
  SineSynthesis& operator=(const SineSynthesis&) = delete;

  int n_interior() const { return n_; }

  /// Forward analysis: coefficients from interior node values.
  void analyze(std::span<const cd> f_interior, std::span<cd> modes_out);

  /// Node values (size n+2, walls at both ends) of the derivative of the
  /// given order (0..3) of the sine series with coefficients `modes`.
  void synthesize(std::span<const cd> modes, double basis_length, int derivative_order,
                  std::span<cd> nodes_out);

 private:
  void run_sine(const std::vector<double>& in, std::vector<double>& out);
  void run_cosine(const std::vector<double>& in, std::vector<double>& out);

  int n_ = 0;
  void* plan_sine_ = nullptr;    // fftw_plan, RODFT00 on n points
  void* plan_cosine_ = nullptr;  // fftw_plan, REDFT00 on n+2 points
  std::vector<double> sin_in_, sin_out_, cos_in_, cos_out_;
};

}  // namespace spintime::detail
