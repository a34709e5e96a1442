#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "monostark/monopole.hpp"
#include "monostark/parabolic.hpp"
#include "monostark/quadrature.hpp"
#include "monostark/scenario.hpp"
#include "monostark/units.hpp"

namespace monostark {

using ordered_json = nlohmann::ordered_json;

/// 17 significant digits: enough to round-trip any double.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline void flatten(const ordered_json& j, const std::string& prefix, std::vector<std::string>& keys,
                    std::vector<std::string>& values) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, keys, values);
        return;
    }
    keys.push_back(prefix);
    if (j.is_null())
        values.emplace_back();
    else if (j.is_string())
        values.push_back(j.get<std::string>());
    else if (j.is_boolean())
        values.emplace_back(j.get<bool>() ? "true" : "false");
    else if (j.is_number_integer())
        values.push_back(std::to_string(j.get<long long>()));
    else if (j.is_number())
        values.push_back(format_double(j.get<double>()));
    else
        values.push_back(j.dump());
}

} // namespace detail

/// One header line and one value line from a (possibly nested) record.
inline void write_record_csv(std::ostream& out, const ordered_json& record) {
    std::vector<std::string> keys, values;
    detail::flatten(record, "", keys, values);
    for (std::size_t i = 0; i < keys.size(); ++i) out << (i ? "," : "") << keys[i];
    out << '\n';
    for (std::size_t i = 0; i < values.size(); ++i) out << (i ? "," : "") << values[i];
    out << '\n';
}

inline ordered_json to_json(const QuantumNumbers& q) { return {{"n1", q.n1}, {"n2", q.n2}, {"m", q.m}}; }

inline ordered_json to_json(const DipoleVector& d) { return {{"dx", d.dx}, {"dy", d.dy}, {"dz", d.dz}}; }

/// Energy, normalization, <z> and dipole of one Stark state.
inline ordered_json state_report(const QuantumNumbers& q, int order, double fd_step_bohr, const Constants& c) {
    validate(q);
    const int n = q.principal();
    const auto rule = rule_for(n, c, order);
    const auto check = rule_for(n, c, std::min(2 * order, max_quadrature_order));
    const double a0 = c.bohr_radius;
    const auto d = electric_dipole_conventional(q, rule, c);
    ordered_json r;
    r["units"] = std::string(to_string(c.system));
    r["qn"] = to_json(q);
    r["n"] = n;
    r["quadrature_order"] = order;
    r["energy"] = bound_energy(n, c);
    r["energy_eV"] = bound_energy(n, c) / c.electron_volt();
    r["norm"] = norm(q, rule, c);
    r["norm_doubled_order"] = norm(q, check, c);
    r["z_expectation_bohr"] = expectation_z(q, rule, c) / a0;
    r["z_closed_form_bohr"] = expectation_z_closed_form(q, c) / a0;
    r["dipole"] = to_json(d);
    r["dz_e_a0"] = d.dz / (c.elementary_charge * a0);

    // Local eigenvalue H0 psi / psi at the largest-amplitude point of a coarse
    // grid, away from the nodal surfaces.
    ParabolicPoint best{n * a0, n * a0, 0.3};
    double best_amp = 0;
    for (int i = 1; i <= 12; ++i)
        for (int j = 1; j <= 12; ++j) {
            const double xi = 0.5 * i * n * a0, eta = 0.5 * j * n * a0;
            const double amp = std::abs(real_amplitude(q, xi, eta, c).value);
            if (amp > best_amp) {
                best_amp = amp;
                best = {xi, eta, 0.3};
            }
        }
    const auto psi = [&](const ParabolicPoint& p) { return parabolic_wavefunction(q, p, c); };
    const double local = (apply_h0(psi, best, c, fd_step_bohr * a0) / psi(best)).real();
    r["fd_step_bohr"] = fd_step_bohr;
    r["h0_local_energy"] = local;
    r["h0_relative_residual"] = std::abs(local - bound_energy(n, c)) / std::abs(bound_energy(n, c));
    return r;
}

/// The record relating both dipole definitions, both shift routes and the charge.
inline ordered_json charge_report(int n, std::optional<QuantumNumbers> state, double field, MeasureMode mode,
                                  int order, const Constants& c) {
    const MagneticCharge g = solve_magnetic_charge(n, c);
    const QuantumNumbers q = state.value_or(QuantumNumbers{0, n - 1, 0});
    validate(q);
    if (q.principal() != n) throw DomainError("charge: state " + to_string(q) + " does not have principal number n");
    const auto rule = rule_for(n, c, order);
    const StarkConfig stark = make_stark_config(field, c);
    const double kappa = g.eg_over_hbar_c(c);
    const double sqrt3n = std::sqrt(3.0) * n;
    const double ea0 = c.elementary_charge * c.bohr_radius;

    const auto literal = stark_shift_monopole(q, stark, g, rule, c, MeasureMode::paper_literal);
    const auto consistent = stark_shift_monopole(q, stark, g, rule, c, MeasureMode::measure_consistent);
    const auto& chosen = mode == MeasureMode::paper_literal ? literal : consistent;

    ordered_json r;
    r["units"] = std::string(to_string(c.system));
    r["qn"] = to_json(q);
    r["mode"] = std::string(to_string(mode));
    r["field"] = field;
    r["perturbative"] = stark.perturbative;

    const double d6 = electric_dipole_conventional(q, rule, c).dz;
    r["dz_eq6"] = d6;
    r["dz_eq6_e_a0"] = d6 / ea0;
    const bool has_dipole = std::abs(d6) > 1e-12 * ea0;
    if (has_dipole) {
        const auto id = identity_residual_eq9(q, g, rule, c);
        const MagneticCharge g0 = residual_zeroing_charge(q, rule, c);
        const auto id0 = identity_residual_eq9(q, g0, rule, c);
        r["dz_eq4"] = id.dz_eq4;
        r["dz_eq4_e_a0"] = id.dz_eq4 / ea0;
        r["residual_eq9"] = id.residual;
        r["g_residual_zeroing"] = g0.g;
        r["eg_over_hbar_c_residual_zeroing"] = g0.eg_over_hbar_c(c);
        r["residual_eq9_at_zeroing_g"] = id0.residual;
        r["surface_decay_ratio"] = id.surface.ratio;
        r["surface_decay_passes"] = id.surface.passes;
    } else {
        for (const char* k : {"dz_eq4", "dz_eq4_e_a0", "residual_eq9", "g_residual_zeroing",
                              "eg_over_hbar_c_residual_zeroing", "residual_eq9_at_zeroing_g"})
            r[k] = nullptr;
    }

    r["dE_eq23"] = stark_shift_monopole_stated(q, stark, g, c);
    r["dE_eq22"] = chosen.energy();
    r["dE_eq22_paper_literal"] = literal.energy();
    r["dE_eq22_measure_consistent"] = consistent.energy();
    r["measure_ratio"] = literal.energy() != 0 ? ordered_json(consistent.energy() / literal.energy()) : ordered_json();
    r["first_term_abs"] = std::abs(chosen.first_term);
    r["first_term_relative"] = chosen.first_term_relative;
    r["dE_eq24"] = stark_shift_conventional(q, stark, rule, c);
    r["g_solved"] = g.g;
    r["eg_over_hbar_c"] = kappa;
    r["deviation_from_sqrt3n"] = (kappa - sqrt3n) / sqrt3n;
    r["ratio_to_dirac_unit"] = g.g / dirac_charge(1, c).g;
    return r;
}

inline ordered_json to_json(const Vec3& v) { return ordered_json::array({v.x(), v.y(), v.z()}); }

inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    out << "t,x,y,z,vx,vy,vz\n";
    for (const auto& s : traj.samples) {
        out << format_double(s.t) << ',' << format_double(s.position.x()) << ',' << format_double(s.position.y())
            << ',' << format_double(s.position.z()) << ',' << format_double(s.velocity.x()) << ','
            << format_double(s.velocity.y()) << ',' << format_double(s.velocity.z()) << '\n';
    }
}

inline ordered_json beam_events_json(const std::string& label, const BeamOutcome& b, const Constants& c) {
    ordered_json crossings = ordered_json::array();
    for (const auto& x : b.ring.crossings) {
        const double flux = x.sign * 4.0 * std::numbers::pi * b.charge.g;
        crossings.push_back({{"t", x.t},
                             {"position", to_json(x.point)},
                             {"sign", x.sign},
                             {"offset", x.offset},
                             {"flux", flux},
                             {"phi0", squid_signal(flux, c)}});
    }
    return {{"label", label},
            {"g", b.charge.g},
            {"eg_over_hbar_c", b.charge.eg_over_hbar_c(c)},
            {"crossings", crossings},
            {"total_flux", b.ring.flux},
            {"squid_phi0", b.squid_phi0},
            {"max_speed_drift", b.max_speed_drift}};
}

inline ordered_json events_json(const Scenario& s, const ExperimentResult& r) {
    const Constants& c = s.constants;
    ordered_json ex{{"wavelength", r.excitation.wavelength},
                    {"photon_energy_eV", r.excitation.photon_energy / c.electron_volt()},
                    {"two_photon_energy_eV", r.excitation.two_photon_energy / c.electron_volt()},
                    {"transition_energy_eV", r.excitation.transition_energy / c.electron_volt()},
                    {"two_photon_mismatch", r.excitation.two_photon_mismatch},
                    {"single_photon_mismatch", r.excitation.single_photon_mismatch},
                    {"two_photon_matches", r.excitation.two_photon_matches}};
    return {{"units", std::string(to_string(c.system))},
            {"n", s.n},
            {"flux_quantum", flux_quantum(c)},
            {"flux_per_crossing", r.flux_per_crossing},
            {"squid_phi0_per_crossing", r.squid_per_crossing},
            {"excitation", ex},
            {"beams", ordered_json::array({beam_events_json("plus", r.plus, c), beam_events_json("minus", r.minus, c)})}};
}

inline ordered_json separation_json(const Scenario& s, const ExperimentResult& r) {
    const Vec3 pa = plane_crossing(r.plus.trajectory, s.plane_z);
    const Vec3 pb = plane_crossing(r.minus.trajectory, s.plane_z);
    return {{"units", std::string(to_string(s.constants.system))},
            {"plane_z", s.plane_z},
            {"plus_crossing", to_json(pa)},
            {"minus_crossing", to_json(pb)},
            {"separation", r.separation}};
}

} // namespace monostark
