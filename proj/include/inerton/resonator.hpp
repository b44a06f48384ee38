#pragma once

// Resonator geometry: the Earth's tangential/radial path lengths, the matching
// tabletop ratio l_tan / l_rad = pi/2, and the admissible spectral window.

#include <cmath>
#include <vector>

#include "inerton/constants.hpp"
#include "inerton/errors.hpp"

namespace inerton {

struct EarthPaths {
  double L_tan = 0.0;  // 2 pi R
  double L_rad = 0.0;  // 4 R
  double ratio = 0.0;  // L_tan / L_rad
};

inline EarthPaths earth_path_lengths(double radius) {
  detail::require_positive(radius, "radius");
  // R cancels in the ratio.
  return {2.0 * kPi * radius, 4.0 * radius, kHalfPi};
}

struct TravelTimes {
  double t_tan = 0.0;
  double t_rad = 0.0;
};

inline TravelTimes travel_times(double L_tan, double L_rad, double c = kConstants.c) {
  detail::require_positive(L_tan, "L_tan");
  detail::require_positive(L_rad, "L_rad");
  detail::require_positive(c, "c");
  return {L_tan / c, L_rad / c};
}

struct ResonatorGeometry {
  double l_tan = 0.0;  // m, horizontal West-East
  double l_rad = 0.0;  // m, vertical
  double ratio = 0.0;
  double ratio_deviation = 0.0;  // |ratio - pi/2| / (pi/2)
};

inline ResonatorGeometry make_geometry(double l_tan, double l_rad) {
  detail::require_positive(l_tan, "l_tan");
  detail::require_positive(l_rad, "l_rad");
  const double ratio = l_tan / l_rad;
  return {l_tan, l_rad, ratio, std::abs(ratio - kHalfPi) / kHalfPi};
}

inline constexpr double kDefaultGeometryTolerance = 0.01;

struct GeometryCheck {
  ResonatorGeometry geometry;
  double tolerance = kDefaultGeometryTolerance;
  bool pass = false;
};

inline GeometryCheck check_geometry(double l_tan, double l_rad,
                                    double tolerance = kDefaultGeometryTolerance) {
  if (!(tolerance > 0.0 && tolerance < 1.0)) {
    throw Error(ErrorCode::InvalidTolerance, "tolerance must lie in (0, 1)");
  }
  GeometryCheck check;
  check.geometry = make_geometry(l_tan, l_rad);
  check.tolerance = tolerance;
  check.pass = check.geometry.ratio_deviation <= tolerance;
  return check;
}

struct SpectralWindow {
  double lambda_min = 0.0;  // m
  double lambda_max = 0.0;  // m
  double nu_min = 0.0;      // Hz
  double nu_max = 0.0;      // Hz
};

/// Wavelengths between c / nu_debye and the largest resonator dimension.
inline SpectralWindow spectral_window(double nu_debye, double l_max, double c = kConstants.c) {
  detail::require_positive(nu_debye, "nu_debye");
  detail::require_positive(l_max, "l_max");
  detail::require_positive(c, "c");
  SpectralWindow w;
  w.lambda_min = c / nu_debye;
  w.lambda_max = l_max;
  if (!(w.lambda_min < w.lambda_max)) {
    throw Error(ErrorCode::EmptyWindow, "c / nu_debye is not below l_max");
  }
  w.nu_min = c / w.lambda_max;
  w.nu_max = c / w.lambda_min;
  return w;
}

struct HarmonicLength {
  int n = 1;
  double l_tan = 0.0;
  double l_rad = 0.0;
};

inline std::vector<HarmonicLength> harmonic_lengths(const ResonatorGeometry& base, int n_max) {
  if (n_max < 1) throw Error(ErrorCode::InvalidParameter, "n_max must be >= 1");
  std::vector<HarmonicLength> out;
  out.reserve(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) out.push_back({n, base.l_tan / n, base.l_rad / n});
  return out;
}

}  // namespace inerton
