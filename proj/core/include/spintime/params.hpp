#pragma once

#include "spintime/errors.hpp"

namespace spintime {

/// Physical constants and setup geometry. Natural units (hbar = m = 1) are
/// the defaults; everything is overridable.
struct PhysicalParams {
  double hbar = 1.0;
  double mass = 1.0;
  double omega = 1.0;              ///< transverse trap angular frequency
  double detector_plane_L = 1.0;   ///< z-coordinate of the arrival plane
  double lambda = 1.0;             ///< guidance-family parameter
  double diffusion_nu = 0.0;       ///< diffusion constant, 0 = deterministic

  void validate() const {
    if (!(hbar > 0.0)) throw ConfigError("hbar must be > 0");
    if (!(mass > 0.0)) throw ConfigError("mass must be > 0");
    if (!(omega > 0.0)) throw ConfigError("omega must be > 0");
    if (!(detector_plane_L > 0.0)) throw ConfigError("detector_plane_L must be > 0");
    if (!(diffusion_nu >= 0.0)) throw ConfigError("diffusion_nu must be >= 0");
  }
};

}  // namespace spintime
