#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string_view>

#include "inerton/constants.hpp"
#include "inerton/errors.hpp"

namespace inerton {

/// v0 from M v0^2 / 2 = k_B T.
inline double thermal_velocity(double mass, double temperature,
                               const PhysicalConstants& k = kConstants) {
  detail::require_positive(mass, "mass");
  detail::require_positive(temperature, "temperature");
  return std::sqrt(2.0 * k.k_B * temperature / mass);
}

/// lambda = h / (M v0).
inline double de_broglie_wavelength(double mass, double velocity,
                                    const PhysicalConstants& k = kConstants) {
  detail::require_positive(mass, "mass");
  detail::require_positive(velocity, "velocity");
  return k.h / (mass * velocity);
}

/// Cloud amplitude from v0 / lambda = c / Lambda.
inline double cloud_amplitude(double velocity, double wavelength,
                              const PhysicalConstants& k = kConstants) {
  detail::require_positive(velocity, "velocity");
  if (velocity >= k.c) {
    throw Error(ErrorCode::Superluminal, "velocity must be below the speed of light");
  }
  if (!(wavelength >= 0.0)) throw Error(ErrorCode::InvalidParameter, "wavelength must be >= 0");
  return wavelength * k.c / velocity;
}

inline double overlap_ratio(double cloud_amplitude, double lattice_constant) {
  detail::require_positive(cloud_amplitude, "cloud amplitude");
  detail::require_positive(lattice_constant, "lattice constant");
  return cloud_amplitude / lattice_constant;
}

struct CloudKinematics {
  double mass = 0.0;                  // kg
  std::optional<double> temperature;  // K
  double v0 = 0.0;                    // m/s
  double lambda = 0.0;                // m
  double Lambda = 0.0;                // m
  std::optional<double> overlap;      // Lambda / g0

  /// Lambda / pi, the envelope of the cloud oscillation.
  double enveloping_amplitude() const { return Lambda / kPi; }
  /// 2 Lambda / pi, the transverse extent of the cloud.
  double transverse_extent() const { return 2.0 * Lambda / kPi; }
};

inline CloudKinematics moving_particle(double mass, double velocity,
                                       std::optional<double> lattice_constant = std::nullopt,
                                       const PhysicalConstants& k = kConstants) {
  CloudKinematics ck;
  ck.mass = mass;
  ck.v0 = velocity;
  ck.lambda = de_broglie_wavelength(mass, velocity, k);
  ck.Lambda = cloud_amplitude(velocity, ck.lambda, k);
  if (lattice_constant) ck.overlap = overlap_ratio(ck.Lambda, *lattice_constant);
  return ck;
}

inline CloudKinematics thermal_particle(double mass, double temperature,
                                        std::optional<double> lattice_constant = std::nullopt,
                                        const PhysicalConstants& k = kConstants) {
  CloudKinematics ck = moving_particle(mass, thermal_velocity(mass, temperature, k),
                                       lattice_constant, k);
  ck.temperature = temperature;
  return ck;
}

enum class FlowKind { Orbital, Rotational };

constexpr std::string_view to_string(FlowKind kind) {
  return kind == FlowKind::Orbital ? "orbital" : "rotational";
}

struct EarthFlow {
  FlowKind kind = FlowKind::Orbital;
  double v = 0.0;       // m/s
  double lambda = 0.0;  // m
  double Lambda = 0.0;  // m
};

inline constexpr double kEarthOrbitalVelocity = 3.0e4;  // m/s
inline constexpr double kEarthMeanAtomMass = 30.0;      // in proton masses

/// Orbital and equatorial-rotation flows for an atom of mass_in_mp proton
/// masses moving with the Earth.
inline std::array<EarthFlow, 2> earth_flows(const PhysicalConstants& k = kConstants,
                                            double mass_in_mp = kEarthMeanAtomMass) {
  const double mass = mass_in_mp * k.M_p;
  auto flow = [&](FlowKind kind, double v) {
    const double lambda = de_broglie_wavelength(mass, v, k);
    return EarthFlow{kind, v, lambda, cloud_amplitude(v, lambda, k)};
  };
  return {flow(FlowKind::Orbital, kEarthOrbitalVelocity),
          flow(FlowKind::Rotational, 2.0 * kPi * k.R_earth / k.day)};
}

}  // namespace inerton
