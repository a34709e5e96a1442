#pragma once

#include <array>
#include <fstream>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "monostark/dynamics.hpp"
#include "monostark/errors.hpp"
#include "monostark/experiment.hpp"
#include "monostark/monopole.hpp"
#include "monostark/units.hpp"

namespace monostark {

/// Experiment scenario, all quantities converted into `constants` units.
///
/// File schema (JSON, lab units in the key names):
///
///   {
///     "units": "gaussian-cgs" | "atomic",                (optional)
///     "state": { "n": 2 },
///     "laser": { "wavelength_angstrom": 2430 },          (optional)
///     "beam": { "speed_cm_per_s": 3e5, "position_cm": [x,y,z],
///               "direction": [x,y,z], "mass_g": m },       (mass optional, default H atom)
///     "field_region": { "field_volt_per_cm": [x,y,z],
///                       "lower_cm": [x,y,z], "upper_cm": [x,y,z] },
///     "ring": { "radius_cm": 1, "center_cm": [x,y,z], "normal": [x,y,z] },
///     "integrator": { "dt_s": 2.5e-11, "steps": 2000000, "sample_every": 1000 },
///     "separation_plane_z_cm": 12                        (optional, default ring center z)
///   }
struct Scenario {
    Constants constants;
    int n = 2;
    double laser_wavelength = 0;
    BeamSpec beam;
    FieldRegion region;
    RingDetector ring;
    double dt = 0;
    long steps = 0;
    long sample_every = 1;
    double plane_z = 0;
};

inline nlohmann::json default_scenario_json() {
    return nlohmann::json::parse(R"({
  "units": "gaussian-cgs",
  "state": { "n": 2 },
  "laser": { "wavelength_angstrom": 2430 },
  "beam": {
    "speed_cm_per_s": 300000.0,
    "position_cm": [0.0, 0.0, -1.0],
    "direction": [0.1, 0.0, 1.0]
  },
  "field_region": {
    "field_volt_per_cm": [0.0, 0.0, 10000.0],
    "lower_cm": [-5.0, -5.0, 0.0],
    "upper_cm": [5.0, 5.0, 10.0]
  },
  "ring": { "radius_cm": 1.0, "center_cm": [0.0, 0.0, 12.0], "normal": [0.0, 0.0, 1.0] },
  "integrator": { "dt_s": 2.5e-11, "steps": 2000000, "sample_every": 1000 }
})");
}

namespace detail {

inline const nlohmann::json& require(const nlohmann::json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) throw SchemaError(path, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(path.empty() ? key : path + "." + key, "missing");
    return *it;
}

inline double number(const nlohmann::json& j, const std::string& path) {
    if (!j.is_number()) throw SchemaError(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw SchemaError(path, "expected a finite number");
    return v;
}

inline Vec3 vec3(const nlohmann::json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 3) throw SchemaError(path, "expected an array of 3 numbers");
    return {number(j[0], path + "[0]"), number(j[1], path + "[1]"), number(j[2], path + "[2]")};
}

inline void reject_unknown(const nlohmann::json& obj, std::initializer_list<const char*> allowed,
                           const std::string& path) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw SchemaError(path.empty() ? key : path + "." + key, "unknown key");
    }
}

} // namespace detail

/// Parse and validate a scenario document. `units_override` takes precedence
/// over the document's "units" key.
inline Scenario parse_scenario(const nlohmann::json& doc, std::optional<UnitSystem> units_override = {}) {
    using detail::number;
    using detail::require;
    using detail::vec3;
    if (!doc.is_object()) throw SchemaError("<root>", "expected an object");
    detail::reject_unknown(doc, {"units", "state", "laser", "beam", "field_region", "ring", "integrator",
                                 "separation_plane_z_cm"},
                           "");
    for (const char* block : {"state", "beam", "field_region", "ring", "integrator"}) require(doc, block, "");

    UnitSystem units = UnitSystem::gaussian_cgs;
    if (doc.contains("units")) {
        if (!doc["units"].is_string()) throw SchemaError("units", "expected a string");
        const auto u = parse_unit_system(doc["units"].get<std::string>());
        if (!u) throw SchemaError("units", "expected \"gaussian-cgs\" or \"atomic\"");
        units = *u;
    }
    if (units_override) units = *units_override;

    Scenario s;
    s.constants = make_unit_system(units);
    const Constants& c = s.constants;

    const auto& state = doc["state"];
    detail::reject_unknown(state, {"n"}, "state");
    const auto& nj = require(state, "n", "state");
    if (!nj.is_number_integer() || nj.get<int>() < 1 || nj.get<int>() > max_principal)
        throw SchemaError("state.n", "expected an integer in [1, 10]");
    s.n = nj.get<int>();

    s.laser_wavelength = 2430.0 * c.angstrom();
    if (doc.contains("laser")) {
        const auto& laser = doc["laser"];
        detail::reject_unknown(laser, {"wavelength_angstrom"}, "laser");
        const double w = number(require(laser, "wavelength_angstrom", "laser"), "laser.wavelength_angstrom");
        if (!(w > 0)) throw SchemaError("laser.wavelength_angstrom", "must be positive");
        s.laser_wavelength = w * c.angstrom();
    }

    const auto& beam = doc["beam"];
    detail::reject_unknown(beam, {"speed_cm_per_s", "position_cm", "direction", "mass_g"}, "beam");
    s.beam.speed = number(require(beam, "speed_cm_per_s", "beam"), "beam.speed_cm_per_s") * c.centimeter / c.second;
    s.beam.position = vec3(require(beam, "position_cm", "beam"), "beam.position_cm") * c.centimeter;
    s.beam.direction = vec3(require(beam, "direction", "beam"), "beam.direction");
    s.beam.mass = beam.contains("mass_g") ? number(beam["mass_g"], "beam.mass_g") * c.gram : c.hydrogen_mass;
    try {
        validate(s.beam, c);
    } catch (const DomainError& e) {
        throw SchemaError("beam", e.what());
    }

    const auto& field = doc["field_region"];
    detail::reject_unknown(field, {"field_volt_per_cm", "lower_cm", "upper_cm"}, "field_region");
    s.region.field = vec3(require(field, "field_volt_per_cm", "field_region"), "field_region.field_volt_per_cm")
                     * c.volt_per_cm();
    s.region.lower = vec3(require(field, "lower_cm", "field_region"), "field_region.lower_cm") * c.centimeter;
    s.region.upper = vec3(require(field, "upper_cm", "field_region"), "field_region.upper_cm") * c.centimeter;
    try {
        validate(s.region);
    } catch (const DomainError& e) {
        throw SchemaError("field_region", e.what());
    }

    const auto& ring = doc["ring"];
    detail::reject_unknown(ring, {"radius_cm", "center_cm", "normal"}, "ring");
    s.ring.radius = number(require(ring, "radius_cm", "ring"), "ring.radius_cm") * c.centimeter;
    s.ring.center = vec3(require(ring, "center_cm", "ring"), "ring.center_cm") * c.centimeter;
    const Vec3 normal = vec3(require(ring, "normal", "ring"), "ring.normal");
    if (!(normal.norm() > 0)) throw SchemaError("ring.normal", "must be nonzero");
    s.ring.normal = normal.normalized();
    try {
        validate(s.ring);
    } catch (const DomainError& e) {
        throw SchemaError("ring", e.what());
    }

    const auto& integ = doc["integrator"];
    detail::reject_unknown(integ, {"dt_s", "steps", "sample_every"}, "integrator");
    s.dt = number(require(integ, "dt_s", "integrator"), "integrator.dt_s") * c.second;
    if (!(s.dt > 0)) throw SchemaError("integrator.dt_s", "must be positive");
    const auto& steps = require(integ, "steps", "integrator");
    if (!steps.is_number_integer() || steps.get<long>() < 1) throw SchemaError("integrator.steps", "expected an integer >= 1");
    s.steps = steps.get<long>();
    if (integ.contains("sample_every")) {
        const auto& se = integ["sample_every"];
        if (!se.is_number_integer() || se.get<long>() < 1)
            throw SchemaError("integrator.sample_every", "expected an integer >= 1");
        s.sample_every = se.get<long>();
    }

    s.plane_z = doc.contains("separation_plane_z_cm")
                    ? number(doc["separation_plane_z_cm"], "separation_plane_z_cm") * c.centimeter
                    : s.ring.center.z();
    return s;
}

inline Scenario load_scenario(const std::string& path, std::optional<UnitSystem> units_override = {}) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot read scenario file '" + path + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError("<root>", std::string("not valid JSON: ") + e.what());
    }
    return parse_scenario(doc, units_override);
}

struct BeamOutcome {
    MagneticCharge charge;
    Trajectory trajectory;
    RingEvent ring;
    double squid_phi0 = 0;
    /// Largest relative speed change over samples inside the field region.
    double max_speed_drift = 0;
};

struct ExperimentResult {
    ExcitationReport excitation;
    BeamOutcome plus;
    BeamOutcome minus;
    double separation = 0;
    double flux_per_crossing = 0;
    double squid_per_crossing = 0;
};

/// Fly the +g / -g pair of Stark states through the field region and count
/// their passages through the ring.
inline ExperimentResult run_experiment(const Scenario& s) {
    const Constants& c = s.constants;
    const MagneticCharge g = solve_magnetic_charge(s.n, c);

    auto fly = [&](double sign) {
        BeamOutcome out;
        out.charge = {sign * g.g, s.n};
        BeamSpec beam = s.beam;
        beam.charge = out.charge;
        out.trajectory = integrate_trajectory(beam, s.region, s.dt, s.steps, c, s.sample_every);
        out.ring = ring_flux_event(out.trajectory, s.ring, out.charge, c);
        out.squid_phi0 = squid_signal(out.ring.flux, c);
        const double v0 = beam.speed;
        for (const auto& smp : out.trajectory.samples)
            if (s.region.contains(smp.position))
                out.max_speed_drift = std::max(out.max_speed_drift, std::abs(smp.velocity.norm() - v0) / v0);
        return out;
    };

    ExperimentResult r;
    r.excitation = excitation_check(s.laser_wavelength, c);
    r.plus = fly(+1.0);
    r.minus = fly(-1.0);
    r.separation = beam_separation(r.plus.trajectory, r.minus.trajectory, s.plane_z);
    r.flux_per_crossing = 4.0 * std::numbers::pi * g.g;
    r.squid_per_crossing = squid_signal(r.flux_per_crossing, c);
    return r;
}

} // namespace monostark
