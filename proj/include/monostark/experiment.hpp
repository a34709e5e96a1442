#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "monostark/errors.hpp"
#include "monostark/monopole.hpp"
#include "monostark/parabolic.hpp"
#include "monostark/units.hpp"

namespace monostark {

using Vec3 = Eigen::Vector3d;

// ---------------------------------------------------------------------------
// Excitation energetics

struct ExcitationReport {
    double wavelength = 0;
    double photon_energy = 0;
    double two_photon_energy = 0;
    double transition_energy = 0;
    double two_photon_mismatch = 0;
    double single_photon_mismatch = 0;
    bool two_photon_matches = false;
};

inline constexpr double excitation_tolerance = 2e-3;

/// Compare one and two photons of the given wavelength with E_2 - E_1.
inline ExcitationReport excitation_check(double wavelength, const Constants& c) {
    ExcitationReport r;
    r.wavelength = wavelength;
    r.photon_energy = photon_energy(wavelength, c);
    r.two_photon_energy = 2.0 * r.photon_energy;
    r.transition_energy = bound_energy(2, c) - bound_energy(1, c);
    r.two_photon_mismatch = std::abs(r.two_photon_energy - r.transition_energy) / r.transition_energy;
    r.single_photon_mismatch = std::abs(r.photon_energy - r.transition_energy) / r.transition_energy;
    r.two_photon_matches = r.two_photon_mismatch < excitation_tolerance;
    return r;
}

// ---------------------------------------------------------------------------
// Beam, field region and detector

inline constexpr double nonrelativistic_limit = 0.01;

struct BeamSpec {
    double mass = 0;
    double speed = 0;
    Vec3 position = Vec3::Zero();
    Vec3 direction = Vec3::UnitZ();
    MagneticCharge charge;

    Vec3 initial_velocity() const { return speed * direction.normalized(); }
};

inline void validate(const BeamSpec& b, const Constants& c) {
    if (!(b.mass > 0)) throw DomainError("beam: mass must be positive");
    if (!(b.speed > 0)) throw DomainError("beam: speed must be positive");
    if (!(b.speed / c.speed_of_light < nonrelativistic_limit))
        throw DomainError("beam: speed must satisfy v/c < 0.01");
    if (!(b.direction.norm() > 0) || !b.direction.allFinite()) throw DomainError("beam: direction must be nonzero");
    if (!b.position.allFinite()) throw DomainError("beam: position must be finite");
}

/// Uniform field inside an axis-aligned box, zero outside.
struct FieldRegion {
    Vec3 field = Vec3::Zero();
    Vec3 lower = Vec3::Constant(-std::numeric_limits<double>::infinity());
    Vec3 upper = Vec3::Constant(std::numeric_limits<double>::infinity());

    bool contains(const Vec3& x) const {
        return (x.array() >= lower.array()).all() && (x.array() <= upper.array()).all();
    }
    Vec3 field_at(const Vec3& x) const { return contains(x) ? field : Vec3::Zero(); }
};

inline void validate(const FieldRegion& r) {
    if (!r.field.allFinite()) throw DomainError("field_region: field must be finite");
    if (!((r.upper - r.lower).array() > 0).all()) throw DomainError("field_region: box must have positive volume");
}

/// Superconducting ring: a disk of `radius` around `center` with unit `normal`.
struct RingDetector {
    double radius = 1;
    Vec3 center = Vec3::Zero();
    Vec3 normal = Vec3::UnitZ();
};

inline void validate(const RingDetector& r) {
    if (!(r.radius > 0)) throw DomainError("ring: radius must be positive");
    if (!(std::abs(r.normal.norm() - 1.0) <= 1e-12)) throw DomainError("ring: normal must be a unit vector");
}

struct TrajectorySample {
    double t = 0;
    Vec3 position = Vec3::Zero();
    Vec3 velocity = Vec3::Zero();
};

/// Samples spaced by `dt` (the stored spacing, a multiple of the integration step).
struct Trajectory {
    double dt = 0;
    std::vector<TrajectorySample> samples;
};

// ---------------------------------------------------------------------------
// Dynamics

/// Force on a magnetic charge moving through a pure electric field: -(g/c) v x E.
inline Vec3 dual_lorentz_force(const MagneticCharge& g, const Vec3& v, const Vec3& field, const Constants& c) {
    return -(g.g / c.speed_of_light) * v.cross(field);
}

/// Classical fourth-order Runge-Kutta integration of the dual-Lorentz equation
/// of motion. Every `sample_every`-th step is stored, plus the initial state.
/// The field is taken at the start of each step and held for all four stages,
/// so a step never mixes field and field-free stages at the box boundary.
inline Trajectory integrate_trajectory(const BeamSpec& beam, const FieldRegion& region, double dt, long n_steps,
                                       const Constants& c, long sample_every = 1) {
    validate(beam, c);
    validate(region);
    if (!(dt > 0)) throw DomainError("integrate_trajectory: dt must be positive");
    if (n_steps < 1) throw DomainError("integrate_trajectory: n_steps must be >= 1");
    if (sample_every < 1) throw DomainError("integrate_trajectory: sample_every must be >= 1");

    const double inv_m = 1.0 / beam.mass;
    Vec3 field = Vec3::Zero();
    auto accel = [&](const Vec3& v) -> Vec3 { return inv_m * dual_lorentz_force(beam.charge, v, field, c); };

    Trajectory traj;
    traj.dt = dt * static_cast<double>(sample_every);
    traj.samples.reserve(static_cast<std::size_t>(n_steps / sample_every + 2));

    Vec3 x = beam.position;
    Vec3 v = beam.initial_velocity();
    traj.samples.push_back({0.0, x, v});
    const double vmax = nonrelativistic_limit * c.speed_of_light;
    for (long step = 1; step <= n_steps; ++step) {
        field = region.field_at(x);
        const Vec3 k1x = v;
        const Vec3 k1v = accel(v);
        const Vec3 k2x = v + 0.5 * dt * k1v;
        const Vec3 k2v = accel(k2x);
        const Vec3 k3x = v + 0.5 * dt * k2v;
        const Vec3 k3v = accel(k3x);
        const Vec3 k4x = v + dt * k3v;
        const Vec3 k4v = accel(k4x);
        x += dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        if (!(v.norm() < vmax)) throw ValidityError("integrate_trajectory: nonrelativistic guard violated");
        if (step % sample_every == 0) traj.samples.push_back({static_cast<double>(step) * dt, x, v});
    }
    return traj;
}

/// Point where the trajectory first crosses the plane z = plane_z (linear interpolation).
inline Vec3 plane_crossing(const Trajectory& traj, double plane_z) {
    const auto& s = traj.samples;
    for (std::size_t k = 0; k + 1 < s.size(); ++k) {
        const double d0 = s[k].position.z() - plane_z;
        const double d1 = s[k + 1].position.z() - plane_z;
        if (d0 == 0) return s[k].position;
        if ((d0 < 0) != (d1 < 0) || d1 == 0) {
            const double f = d0 / (d0 - d1);
            return s[k].position + f * (s[k + 1].position - s[k].position);
        }
    }
    throw NoCrossingError("trajectory never reaches the plane z = plane_z");
}

/// Transverse (x, y) distance between the two beams where they cross z = plane_z.
inline double beam_separation(const Trajectory& a, const Trajectory& b, double plane_z) {
    const Vec3 pa = plane_crossing(a, plane_z);
    const Vec3 pb = plane_crossing(b, plane_z);
    return std::hypot(pa.x() - pb.x(), pa.y() - pb.y());
}

// ---------------------------------------------------------------------------
// Detection

struct RingCrossing {
    double t = 0;
    Vec3 point = Vec3::Zero();
    /// +1 when moving along the ring normal, -1 against it.
    int sign = 0;
    /// Distance of the crossing point from the ring center.
    double offset = 0;
};

struct RingEvent {
    double flux = 0;
    std::vector<RingCrossing> crossings;
};

/// Flux change 4 pi g per signed passage through the ring's disk, independent
/// of where or at what angle the disk is crossed.
inline RingEvent ring_flux_event(const Trajectory& traj, const RingDetector& ring, const MagneticCharge& g,
                                 const Constants& c) {
    (void)c;
    validate(ring);
    RingEvent ev;
    const auto& s = traj.samples;
    const double four_pi = 4.0 * std::numbers::pi;
    for (std::size_t k = 0; k + 1 < s.size(); ++k) {
        const Vec3& x0 = s[k].position;
        const Vec3& x1 = s[k + 1].position;
        const double d0 = ring.normal.dot(x0 - ring.center);
        const double d1 = ring.normal.dot(x1 - ring.center);
        const bool crosses = (d0 < 0 && d1 >= 0) || (d0 >= 0 && d1 < 0);
        if (!crosses) {
            // A reversal of the normal velocity within one step of the plane
            // could hide two crossings that the sampling cannot separate.
            const double vn0 = ring.normal.dot(s[k].velocity);
            const double vn1 = ring.normal.dot(s[k + 1].velocity);
            const double step_len = (x1 - x0).norm();
            if (vn0 * vn1 < 0 && std::min(std::abs(d0), std::abs(d1)) <= step_len) {
                const Vec3 proj = x0 - d0 * ring.normal - ring.center;
                if (proj.norm() <= ring.radius + step_len)
                    throw ResolutionError("ring_flux_event: sampling too coarse to resolve a crossing");
            }
            continue;
        }
        const double f = d0 / (d0 - d1);
        const Vec3 p = x0 + f * (x1 - x0);
        const double offset = (p - ring.center).norm();
        if (offset > ring.radius) continue;
        const int sign = d1 > d0 ? +1 : -1;
        ev.crossings.push_back({s[k].t + f * (s[k + 1].t - s[k].t), p, sign, offset});
        ev.flux += sign * four_pi * g.g;
    }
    return ev;
}

/// Superconducting flux quantum hc/2e = pi hbar c / e.
inline double flux_quantum(const Constants& c) {
    return std::numbers::pi * c.hbar * c.speed_of_light / c.elementary_charge;
}

inline double squid_signal(double flux, const Constants& c) { return flux / flux_quantum(c); }

} // namespace monostark
