#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include "monostark/errors.hpp"

namespace monostark {

enum class UnitSystem { gaussian_cgs, atomic };

namespace codata2018 {
// CODATA 2018 recommended values, converted to Gaussian cgs.
// e is exact: 1.602176634e-19 C times 2.99792458e9 statC/C.
inline constexpr double hbar_erg_s = 1.054571817e-27;
inline constexpr double electron_mass_g = 9.1093837015e-28;
inline constexpr double elementary_charge_statc = 4.803204712570263e-10;
inline constexpr double speed_of_light_cm_s = 2.99792458e10;
inline constexpr double electron_volt_erg = 1.602176634e-12;
inline constexpr double atomic_mass_unit_g = 1.66053906660e-24;
inline constexpr double hydrogen_atom_mass_u = 1.00782503223;
// 1 V = 1e8 / c statvolt.
inline constexpr double statvolt_per_volt = 1.0e8 / speed_of_light_cm_s;
} // namespace codata2018

/// Physical constants and derived atomic scales in one coherent unit system.
///
/// The "unit size" members give the size of a cgs unit expressed in this
/// system: in Gaussian mode they are all 1, in atomic mode `centimeter` is
/// 1/a0[cm] and so on. Conversion of user-facing quantities goes through them.
struct Constants {
    UnitSystem system = UnitSystem::gaussian_cgs;

    double hbar = 0;
    double electron_mass = 0;
    double elementary_charge = 0;
    double speed_of_light = 0;

    double bohr_radius = 0;        // hbar^2 / (m e^2)
    double compton_wavelength = 0; // hbar / (m c), reduced
    double fine_structure = 0;     // e^2 / (hbar c)

    double hydrogen_mass = 0;

    double centimeter = 1;
    double second = 1;
    double gram = 1;
    double statcoulomb = 1;

    double erg() const { return gram * centimeter * centimeter / (second * second); }
    double electron_volt() const { return codata2018::electron_volt_erg * erg(); }
    double angstrom() const { return 1e-8 * centimeter; }
    double statvolt_per_cm() const { return statcoulomb / (centimeter * centimeter); }
    double volt_per_cm() const { return codata2018::statvolt_per_volt * statvolt_per_cm(); }

    /// Atomic unit of field, e / a0^2.
    double atomic_field() const { return elementary_charge / (bohr_radius * bohr_radius); }
    double hartree() const { return elementary_charge * elementary_charge / bohr_radius; }
    /// Natural unit of magnetic charge, hbar c / e.
    double hbar_c_over_e() const { return hbar * speed_of_light / elementary_charge; }
};

inline Constants make_unit_system(UnitSystem mode) {
    namespace k = codata2018;
    const double a0_cm = k::hbar_erg_s * k::hbar_erg_s
                         / (k::electron_mass_g * k::elementary_charge_statc * k::elementary_charge_statc);
    const double alpha = k::elementary_charge_statc * k::elementary_charge_statc
                         / (k::hbar_erg_s * k::speed_of_light_cm_s);
    const double hartree_erg = k::elementary_charge_statc * k::elementary_charge_statc / a0_cm;
    const double atomic_time_s = k::hbar_erg_s / hartree_erg;
    const double m_hydrogen_g = k::hydrogen_atom_mass_u * k::atomic_mass_unit_g;

    Constants c;
    c.system = mode;
    if (mode == UnitSystem::gaussian_cgs) {
        c.hbar = k::hbar_erg_s;
        c.electron_mass = k::electron_mass_g;
        c.elementary_charge = k::elementary_charge_statc;
        c.speed_of_light = k::speed_of_light_cm_s;
        c.hydrogen_mass = m_hydrogen_g;
    } else {
        c.hbar = 1.0;
        c.electron_mass = 1.0;
        c.elementary_charge = 1.0;
        c.speed_of_light = 1.0 / alpha;
        c.hydrogen_mass = m_hydrogen_g / k::electron_mass_g;
        c.centimeter = 1.0 / a0_cm;
        c.second = 1.0 / atomic_time_s;
        c.gram = 1.0 / k::electron_mass_g;
        c.statcoulomb = 1.0 / k::elementary_charge_statc;
    }
    c.bohr_radius = c.hbar * c.hbar / (c.electron_mass * c.elementary_charge * c.elementary_charge);
    c.compton_wavelength = c.hbar / (c.electron_mass * c.speed_of_light);
    c.fine_structure = c.elementary_charge * c.elementary_charge / (c.hbar * c.speed_of_light);
    return c;
}

inline std::string_view to_string(UnitSystem u) {
    return u == UnitSystem::gaussian_cgs ? "gaussian-cgs" : "atomic";
}

inline std::optional<UnitSystem> parse_unit_system(std::string_view s) {
    if (s == "gaussian-cgs") return UnitSystem::gaussian_cgs;
    if (s == "atomic") return UnitSystem::atomic;
    return std::nullopt;
}

/// Photon energy 2*pi*hbar*c / wavelength.
inline double photon_energy(double wavelength, const Constants& c) {
    if (!(wavelength > 0)) throw DomainError("photon_energy: wavelength must be positive");
    return 2.0 * std::numbers::pi * c.hbar * c.speed_of_light / wavelength;
}

} // namespace monostark
