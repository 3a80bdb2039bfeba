#pragma once

#include <numbers>

namespace tdie {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSpeedOfLight = 299792458.0;              // m/s
inline constexpr double kMu0 = 4.0e-7 * kPi;                      // H/m
inline constexpr double kEps0 = 1.0 / (kMu0 * kSpeedOfLight * kSpeedOfLight);
inline constexpr double kEta0 = kMu0 * kSpeedOfLight;             // Ohm

}  // namespace tdie
