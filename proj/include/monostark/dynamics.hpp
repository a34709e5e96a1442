#pragma once

#include <cmath>
#include <utility>

#include "monostark/errors.hpp"
#include "monostark/monopole.hpp"
#include "monostark/parabolic.hpp"
#include "monostark/units.hpp"

namespace monostark {

/// Angular frequency (E_n - E_1) / hbar of the n -> ground transition.
inline double transition_frequency(int n, const Constants& c) {
    if (n < 2) throw DomainError("transition_frequency: n must be >= 2");
    return (bound_energy(n, c) - bound_energy(1, c)) / c.hbar;
}

/// Excited level n radiatively mixed with the ground state.
struct MixedPair {
    int n = 2;
    double omega_n = 0;
    MagneticCharge g_n;
};

inline MixedPair make_mixed_pair(int n, const Constants& c) {
    return {n, transition_frequency(n, c), solve_magnetic_charge(n, c)};
}

/// Two-level mixing amplitudes.
struct MixingAmplitudes {
    double excited = 0;
    double ground = 0;
};

/// For the state that started excited: (cos wt, sin wt) on (|n>, |0>).
inline MixingAmplitudes mixed_amplitudes(const MixedPair& pair, double t) {
    if (!(t >= 0)) throw DomainError("mixed_amplitudes: t must be >= 0");
    const double wt = pair.omega_n * t;
    return {std::cos(wt), std::sin(wt)};
}

/// For the state that started in the ground level: (-sin wt, cos wt) on (|n>, |0>).
inline MixingAmplitudes mixed_amplitudes_from_ground(const MixedPair& pair, double t) {
    if (!(t >= 0)) throw DomainError("mixed_amplitudes: t must be >= 0");
    const double wt = pair.omega_n * t;
    return {-std::sin(wt), std::cos(wt)};
}

struct ChargeSplit {
    double g_n = 0;
    double g_0 = 0;
};

/// g_n cos^2(wt) stays with the excited state, g_n sin^2(wt) moves to the ground state.
inline ChargeSplit charge_evolution(const MixedPair& pair, double t) {
    const auto a = mixed_amplitudes(pair, t);
    const double g = pair.g_n.g;
    return {g * a.excited * a.excited, g * a.ground * a.ground};
}

} // namespace monostark
