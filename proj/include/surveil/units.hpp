#pragma once

#include <cmath>
#include <numbers>

namespace surveil {

inline constexpr double kSpeedOfLight = 3.0e8;  // m/s, rounded as in the reference wavelength table
inline constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F/m
inline constexpr double kEarthRadius = 6.371e6;              // m
inline constexpr double kPi = std::numbers::pi;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

inline double wavelength_for(double frequency_hz) { return kSpeedOfLight / frequency_hz; }

}  // namespace surveil
