#pragma once

#include <numbers>

// hbar = 1. Frequencies are angular (rad/ps) internally; user-facing values
// are ordinary THz. Delays are user-facing in fs.
namespace isrs::units {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

constexpr double angular_from_thz(double thz) { return two_pi * thz; }
constexpr double thz_from_angular(double w) { return w / two_pi; }
constexpr double ps_from_fs(double fs) { return fs * 1e-3; }
constexpr double rad_from_deg(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double deg_from_rad(double rad) { return rad * 180.0 / std::numbers::pi; }

}  // namespace isrs::units
