#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "monostark/dynamics.hpp"
#include "monostark/errors.hpp"
#include "monostark/report.hpp"
#include "monostark/scenario.hpp"
#include "monostark/units.hpp"

namespace monostark {

enum ExitCode : int { exit_ok = 0, exit_usage = 2, exit_numerical = 3 };

inline constexpr const char* output_dir_env = "MONOSTARK_OUT_DIR";

/// Settings shared by every subcommand. Precedence, lowest first: built-in
/// defaults, MONOSTARK_OUT_DIR, the --config file, command-line flags.
struct RunConfig {
    UnitSystem units = UnitSystem::gaussian_cgs;
    int quadrature_order = 80;
    double fd_step_bohr = 1.0 / 200.0;
    MeasureMode mode = MeasureMode::paper_literal;
    std::string output_dir = ".";
    std::string format = "json";
    /// True once a config file or flag has chosen the unit system explicitly.
    bool units_set = false;
};

inline void validate(const RunConfig& rc) {
    if (rc.quadrature_order < 16 || rc.quadrature_order > max_quadrature_order)
        throw DomainError("quadrature order must be in [16, 256]");
    if (!(rc.fd_step_bohr > 0)) throw DomainError("finite-difference step must be positive");
    if (rc.format != "csv" && rc.format != "json") throw DomainError("format must be csv or json");
    if (rc.output_dir.empty()) throw DomainError("output directory must not be empty");
}

/// Overlay a JSON config document (keys as in RunConfig) onto `rc`.
inline void apply_config_file(RunConfig& rc, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot read config file '" + path + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError("<root>", std::string("not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw SchemaError("<root>", "expected an object");
    for (const auto& [key, v] : doc.items()) {
        if (key == "units") {
            const auto u = v.is_string() ? parse_unit_system(v.get<std::string>()) : std::nullopt;
            if (!u) throw SchemaError(key, "expected \"gaussian-cgs\" or \"atomic\"");
            rc.units = *u;
            rc.units_set = true;
        } else if (key == "quadrature_order") {
            if (!v.is_number_integer()) throw SchemaError(key, "expected an integer");
            rc.quadrature_order = v.get<int>();
        } else if (key == "fd_step_bohr") {
            if (!v.is_number()) throw SchemaError(key, "expected a number");
            rc.fd_step_bohr = v.get<double>();
        } else if (key == "measure_mode") {
            const auto m = v.is_string() ? parse_measure_mode(v.get<std::string>()) : std::nullopt;
            if (!m) throw SchemaError(key, "expected \"paper_literal\" or \"measure_consistent\"");
            rc.mode = *m;
        } else if (key == "output_dir") {
            if (!v.is_string()) throw SchemaError(key, "expected a string");
            rc.output_dir = v.get<std::string>();
        } else if (key == "format") {
            if (!v.is_string()) throw SchemaError(key, "expected a string");
            rc.format = v.get<std::string>();
        } else {
            throw SchemaError(key, "unknown key");
        }
    }
}

namespace detail {

inline std::ofstream open_output(const RunConfig& rc, const std::string& name) {
    std::error_code ec;
    std::filesystem::create_directories(rc.output_dir, ec);
    const auto path = std::filesystem::path(rc.output_dir) / name;
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw DomainError("output directory '" + rc.output_dir + "' is not writable");
    return f;
}

inline void emit_record(const RunConfig& rc, const std::string& stem, const ordered_json& rec, std::ostream& out) {
    auto f = open_output(rc, stem + "." + rc.format);
    if (rc.format == "json") {
        const std::string text = rec.dump(2) + "\n";
        f << text;
        out << text;
    } else {
        write_record_csv(f, rec);
        write_record_csv(out, rec);
    }
}

} // namespace detail

inline int cmd_state(const RunConfig& rc, const QuantumNumbers& q, std::ostream& out) {
    const Constants c = make_unit_system(rc.units);
    detail::emit_record(rc, "state", state_report(q, rc.quadrature_order, rc.fd_step_bohr, c), out);
    return exit_ok;
}

inline int cmd_charge(const RunConfig& rc, int n, std::optional<QuantumNumbers> q, double field_au,
                      std::ostream& out) {
    const Constants c = make_unit_system(rc.units);
    if (!(field_au >= 0)) throw DomainError("field must be >= 0");
    detail::emit_record(rc, "charge", charge_report(n, q, field_au * c.atomic_field(), rc.mode, rc.quadrature_order, c),
                        out);
    return exit_ok;
}

/// Time series of the charge split, t in seconds, charges in system units.
inline int cmd_oscillate(const RunConfig& rc, int n, double t_max_s, long steps, std::ostream& out) {
    if (!(t_max_s >= 0) || !std::isfinite(t_max_s)) throw DomainError("t-max must be a finite value >= 0");
    if (steps < 1) throw DomainError("steps must be >= 1");
    const Constants c = make_unit_system(rc.units);
    const MixedPair pair = make_mixed_pair(n, c);
    auto f = detail::open_output(rc, "oscillate.csv");
    f << "t_s,g_n,g_0,sum\n";
    for (long k = 0; k < steps; ++k) {
        const double t_s = steps > 1 ? t_max_s * static_cast<double>(k) / static_cast<double>(steps - 1) : 0.0;
        const auto split = charge_evolution(pair, t_s * c.second);
        f << format_double(t_s) << ',' << format_double(split.g_n) << ',' << format_double(split.g_0) << ','
          << format_double(split.g_n + split.g_0) << '\n';
    }
    out << "oscillate: wrote " << steps << " rows to "
        << (std::filesystem::path(rc.output_dir) / "oscillate.csv").string() << '\n';
    return exit_ok;
}

inline int cmd_experiment(const RunConfig& rc, const std::optional<std::string>& scenario_path,
                          std::optional<UnitSystem> units_override, std::ostream& out) {
    const Scenario s = scenario_path ? load_scenario(*scenario_path, units_override)
                                     : parse_scenario(default_scenario_json(), units_override);
    const ExperimentResult r = run_experiment(s);
    {
        auto f = detail::open_output(rc, "trajectory_plus.csv");
        write_trajectory_csv(f, r.plus.trajectory);
    }
    {
        auto f = detail::open_output(rc, "trajectory_minus.csv");
        write_trajectory_csv(f, r.minus.trajectory);
    }
    const auto events = events_json(s, r);
    const auto sep = separation_json(s, r);
    detail::open_output(rc, "events.json") << events.dump(2) << '\n';
    detail::open_output(rc, "separation.json") << sep.dump(2) << '\n';
    out << "experiment: separation " << format_double(r.separation) << ", SQUID "
        << format_double(r.squid_per_crossing) << " flux quanta per crossing, outputs in " << rc.output_dir << '\n';
    return exit_ok;
}

/// Entry point shared by the executable and the tests.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Magnetically charged hydrogen Stark states: state, charge, oscillate, experiment"};
    app.require_subcommand(1);

    std::string config_path, units_s, mode_s, out_dir, format;
    int order = 0;
    double step = 0;
    auto* o_config = app.add_option("--config", config_path, "JSON run-config file (keys as the flags)");
    auto* o_units = app.add_option("--units", units_s, "Unit system: gaussian-cgs | atomic (default gaussian-cgs)")
                        ->check(CLI::IsMember({"gaussian-cgs", "atomic"}));
    auto* o_order = app.add_option("--order", order, "Gauss-Laguerre order per axis, >= 16 (default 80)");
    auto* o_step = app.add_option("--step", step, "Finite-difference step in Bohr radii (default 0.005)");
    auto* o_mode = app.add_option("--mode", mode_s, "Shift measure: paper_literal | measure_consistent (default paper_literal)")
                       ->check(CLI::IsMember({"paper_literal", "measure_consistent", "paper-literal", "measure-consistent"}));
    auto* o_out = app.add_option("--out-dir", out_dir, std::string("Output directory (default $") + output_dir_env + " or .)");
    auto* o_format = app.add_option("--format", format, "Report format: json | csv (default json)")
                         ->check(CLI::IsMember({"json", "csv"}));

    auto* state = app.add_subcommand("state", "Energy, normalization, <z> and dipole of a Stark state");
    int n1 = 0, n2 = 0, m = 0;
    state->add_option("--n1", n1, "Parabolic quantum number n1")->required();
    state->add_option("--n2", n2, "Parabolic quantum number n2")->required();
    state->add_option("--m", m, "Magnetic quantum number");

    auto* charge = app.add_subcommand("charge", "Magnetic charge, both shift routes and the dipole identity");
    int cn = 0, cn1 = 0, cn2 = 0;
    double field_au = 1e-4;
    charge->add_option("--n", cn, "Principal quantum number")->required();
    auto* o_cn1 = charge->add_option("--n1", cn1, "State n1 (default 0)");
    auto* o_cn2 = charge->add_option("--n2", cn2, "State n2 (default n-1)");
    charge->add_option("--field-au", field_au, "Field strength in units of e/a0^2 (default 1e-4)");

    auto* osc = app.add_subcommand("oscillate", "Charge exchange with the ground state over time (CSV)");
    int on = 2;
    double t_max = 1e-15;
    long steps = 100;
    osc->add_option("--n", on, "Excited level n >= 2")->required();
    osc->add_option("--t-max", t_max, "Final time in seconds (default 1e-15)");
    osc->add_option("--steps", steps, "Number of rows (default 100)");

    auto* exp = app.add_subcommand("experiment", "Beam deflection and SQUID detection simulation");
    std::string scenario;
    auto* o_scenario = exp->add_option("--scenario", scenario, "Scenario JSON file (default: built-in scenario)");

    for (auto* sub : {state, charge, osc, exp}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        RunConfig rc;
        if (const char* env = std::getenv(output_dir_env); env && *env) rc.output_dir = env;
        if (o_config->count()) apply_config_file(rc, config_path);
        if (o_units->count()) {
            rc.units = *parse_unit_system(units_s);
            rc.units_set = true;
        }
        if (o_order->count()) rc.quadrature_order = order;
        if (o_step->count()) rc.fd_step_bohr = step;
        if (o_mode->count()) rc.mode = *parse_measure_mode(mode_s);
        if (o_out->count()) rc.output_dir = out_dir;
        if (o_format->count()) rc.format = format;
        validate(rc);

        if (state->parsed()) return cmd_state(rc, QuantumNumbers{n1, n2, m}, out);
        if (charge->parsed()) {
            std::optional<QuantumNumbers> q;
            if (o_cn1->count() || o_cn2->count())
                q = QuantumNumbers{o_cn1->count() ? cn1 : 0, o_cn2->count() ? cn2 : cn - 1, 0};
            return cmd_charge(rc, cn, q, field_au, out);
        }
        if (osc->parsed()) return cmd_oscillate(rc, on, t_max, steps, out);
        if (exp->parsed()) {
            std::optional<UnitSystem> units;
            if (rc.units_set) units = rc.units;
            return cmd_experiment(rc, o_scenario->count() ? std::optional(scenario) : std::nullopt, units, out);
        }
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        return exit_numerical;
    }
    return exit_usage;
}

} // namespace monostark
