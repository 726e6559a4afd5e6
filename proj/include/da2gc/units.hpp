#pragma once

#include <cmath>
#include <numbers>

namespace da2gc {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kThermalNoiseDbmPerHz = -174.0;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

inline double wavelength_m(double frequency_hz) { return kSpeedOfLight / frequency_hz; }

inline double kmh_to_ms(double kmh) { return kmh / 3.6; }

}  // namespace da2gc
