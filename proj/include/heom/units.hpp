#ifndef heom_units_hpp
#define heom_units_hpp

#include <numbers>

namespace heom::units {

// Speed of light in cm/ps.
inline constexpr double speed_of_light_cm_per_ps = 2.99792458e-2;

// Wavenumber to angular frequency: omega [rad/ps] = 2 pi c nu [cm^-1].
inline constexpr double cm1_to_angular = 2.0 * std::numbers::pi * speed_of_light_cm_per_ps;

// Boltzmann constant over h c (CODATA 2018: k_B = 1.380649e-23 J/K, h = 6.62607015e-34 J s,
// c = 2.99792458e10 cm/s).
inline constexpr double kB_cm1_per_K = 1.380649e-23 / (6.62607015e-34 * 2.99792458e10);

// Offset the sampled site energies are quoted against. Metadata only: a uniform
// diagonal shift is a global phase and drops out of the reduced dynamics.
inline constexpr double site_energy_offset_cm1 = 12400.0;

constexpr double to_angular(double wavenumber_cm1) { return wavenumber_cm1 * cm1_to_angular; }
constexpr double to_wavenumber(double angular_rad_per_ps) { return angular_rad_per_ps / cm1_to_angular; }

constexpr double fs_to_ps(double fs) { return fs * 1e-3; }
constexpr double ps_to_fs(double ps) { return ps * 1e3; }

} // namespace heom::units

#endif // heom_units_hpp
