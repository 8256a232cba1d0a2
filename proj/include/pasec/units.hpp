#pragma once

#include <cmath>

namespace pasec {

inline constexpr double kSpeedOfLight = 2.99792458e8;  // m/s

// Power conversions. Linear powers are in milliwatts throughout the library.
inline double dbm_to_linear(double p_dbm) { return std::pow(10.0, p_dbm / 10.0); }
inline double linear_to_dbm(double p_mw) { return 10.0 * std::log10(p_mw); }

}  // namespace pasec
