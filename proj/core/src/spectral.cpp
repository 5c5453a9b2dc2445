#include "spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace spintime::detail {

namespace {
// FFTW plan creation/destruction is not thread-safe; execution on distinct
// buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

SineSynthesis::SineSynthesis(int n_interior) : n_(n_interior) {
  if (n_ < 1) throw std::invalid_argument("SineSynthesis needs >= 1 interior node");
  sin_in_.resize(n_);
  sin_out_.resize(n_);
  cos_in_.resize(n_ + 2);
  cos_out_.resize(n_ + 2);
  std::lock_guard<std::mutex> lock(planner_mutex());
  plan_sine_ = fftw_plan_r2r_1d(n_, sin_in_.data(), sin_out_.data(), FFTW_RODFT00,
                                FFTW_ESTIMATE);
  plan_cosine_ = fftw_plan_r2r_1d(n_ + 2, cos_in_.data(), cos_out_.data(), FFTW_REDFT00,
                                  FFTW_ESTIMATE);
}

SineSynthesis::~SineSynthesis() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (plan_sine_) fftw_destroy_plan(static_cast<fftw_plan>(plan_sine_));
  if (plan_cosine_) fftw_destroy_plan(static_cast<fftw_plan>(plan_cosine_));
}

void SineSynthesis::run_sine(const std::vector<double>& in, std::vector<double>& out) {
  fftw_execute_r2r(static_cast<fftw_plan>(plan_sine_), const_cast<double*>(in.data()),
                   out.data());
}

void SineSynthesis::run_cosine(const std::vector<double>& in, std::vector<double>& out) {
  fftw_execute_r2r(static_cast<fftw_plan>(plan_cosine_), const_cast<double*>(in.data()),
                   out.data());
}

void SineSynthesis::analyze(std::span<const cd> f_interior, std::span<cd> modes_out) {
  // RODFT00 gives 2 * sum_j f_j sin(pi k j/(n+1)); orthogonality factor (n+1)/2.
  const double scale = 1.0 / (n_ + 1);
  for (int part = 0; part < 2; ++part) {
    for (int j = 0; j < n_; ++j)
      sin_in_[j] = part == 0 ? f_interior[j].real() : f_interior[j].imag();
    run_sine(sin_in_, sin_out_);
    for (int k = 0; k < n_; ++k) {
      if (part == 0)
        modes_out[k] = cd(sin_out_[k] * scale, 0.0);
      else
        modes_out[k] += cd(0.0, sin_out_[k] * scale);
    }
  }
}

void SineSynthesis::synthesize(std::span<const cd> modes, double basis_length,
                               int derivative_order, std::span<cd> nodes_out) {
  const bool cosine = (derivative_order % 2) == 1;  // odd derivatives flip parity
  const double sign = (derivative_order >= 2) ? -1.0 : 1.0;
  for (int part = 0; part < 2; ++part) {
    if (cosine) {
      cos_in_[0] = 0.0;
      cos_in_[n_ + 1] = 0.0;
      for (int k = 1; k <= n_; ++k) {
        const double kap = M_PI * k / basis_length;
        const double coeff = part == 0 ? modes[k - 1].real() : modes[k - 1].imag();
        cos_in_[k] = 0.5 * sign * coeff * std::pow(kap, derivative_order);
      }
      run_cosine(cos_in_, cos_out_);
      for (int j = 0; j <= n_ + 1; ++j) {
        if (part == 0)
          nodes_out[j] = cd(cos_out_[j], 0.0);
        else
          nodes_out[j] += cd(0.0, cos_out_[j]);
      }
    } else {
      for (int k = 1; k <= n_; ++k) {
        const double kap = M_PI * k / basis_length;
        const double coeff = part == 0 ? modes[k - 1].real() : modes[k - 1].imag();
        sin_in_[k - 1] = 0.5 * sign * coeff * std::pow(kap, derivative_order);
      }
      run_sine(sin_in_, sin_out_);
      nodes_out[0] = (part == 0) ? cd(0.0, 0.0) : nodes_out[0];
      nodes_out[n_ + 1] = (part == 0) ? cd(0.0, 0.0) : nodes_out[n_ + 1];
      for (int j = 1; j <= n_; ++j) {
        if (part == 0)
          nodes_out[j] = cd(sin_out_[j - 1], 0.0);
        else
          nodes_out[j] += cd(0.0, sin_out_[j - 1]);
      }
    }
  }
}

}  // namespace spintime::detail
