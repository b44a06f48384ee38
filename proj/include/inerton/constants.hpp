#pragma once

#include <numbers>

namespace inerton {

/// SI constants. The proton mass is the rounded 1.67e-27 kg used for the
/// reference estimates, not the CODATA value.
struct PhysicalConstants {
  double h = 6.62607015e-34;        // J s
  double k_B = 1.380649e-23;        // J/K
  double c = 299792458.0;           // m/s
  double M_p = 1.67e-27;            // kg
  double R_earth = 6.371e6;         // m
  double day = 86400.0;             // s
};

inline constexpr PhysicalConstants kConstants{};

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = std::numbers::pi / 2.0;

}  // namespace inerton
