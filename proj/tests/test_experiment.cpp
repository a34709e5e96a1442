#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <cmath>
#include <numbers>
#include <vector>

#include "monostark/experiment.hpp"
#include "monostark/scenario.hpp"
#include "solid_angle.hpp"

using namespace monostark;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using oracle::straight_path;
using oracle::unwrapped_solid_angle_change;

namespace {

const Constants cgs = make_unit_system(UnitSystem::gaussian_cgs);
const double pi = std::numbers::pi;

BeamSpec beam_along(const Vec3& pos, const Vec3& dir, const MagneticCharge& g, double speed = 3e5) {
    BeamSpec b;
    b.mass = cgs.hydrogen_mass;
    b.speed = speed;
    b.position = pos;
    b.direction = dir;
    b.charge = g;
    return b;
}

FieldRegion uniform(const Vec3& field) {
    FieldRegion r;
    r.field = field;
    return r;
}

} // namespace

TEST_CASE("excitation energetics") {
    const auto r = excitation_check(2430 * cgs.angstrom(), cgs);
    CHECK_THAT(r.photon_energy / cgs.electron_volt(), WithinRel(5.102, 1e-3));
    CHECK_THAT(r.transition_energy / cgs.electron_volt(), WithinRel(10.2043, 1e-4));
    CHECK(r.two_photon_mismatch < 2e-3);
    CHECK(r.two_photon_matches);
    CHECK_THAT(r.single_photon_mismatch, WithinAbs(0.5, 1e-2));
    const auto dye = excitation_check(4860 * cgs.angstrom(), cgs);
    CHECK(dye.photon_energy == 0.5 * r.photon_energy);
    CHECK_FALSE(dye.two_photon_matches);
}

TEST_CASE("dual lorentz force") {
    const auto g = solve_magnetic_charge(2, cgs);
    const Vec3 v{1e5, 2e4, -3e4}, e{0, 0, 30};
    CHECK(dual_lorentz_force(MagneticCharge{0.0, 2}, v, e, cgs).norm() == 0.0);
    CHECK(dual_lorentz_force(g, Vec3{0, 0, 5e4}, e, cgs).norm() == 0.0);
    const Vec3 fp = dual_lorentz_force(g, v, e, cgs);
    const Vec3 fm = dual_lorentz_force(MagneticCharge{-g.g, 2}, v, e, cgs);
    CHECK(fp == -fm);
    CHECK_THAT(fp.dot(v), WithinAbs(0.0, 1e-12 * fp.norm() * v.norm()));
}

TEST_CASE("free flight is a straight line") {
    const auto beam = beam_along(Vec3{0.1, -0.2, -1.0}, Vec3{0.3, 0.1, 1.0}, solve_magnetic_charge(2, cgs));
    const double dt = 1e-8;
    const auto traj = integrate_trajectory(beam, uniform(Vec3::Zero()), dt, 1000, cgs);
    for (const auto& s : traj.samples) {
        const Vec3 exact = beam.position + s.t * beam.initial_velocity();
        CHECK((s.position - exact).norm() < 1e-12);
    }
    CHECK(traj.samples.size() == 1001);
}

TEST_CASE("uniform field bends the beam on a circle of radius m v c / (g E)") {
    const auto g = solve_magnetic_charge(2, cgs);
    const double field = 1e4 * cgs.volt_per_cm();
    const auto beam = beam_along(Vec3::Zero(), Vec3::UnitX(), g);
    const double radius = beam.mass * beam.speed * cgs.speed_of_light / (g.g * field);
    const double omega = beam.speed / radius;
    const double dt = 2 * pi / omega / 2000;
    const auto traj = integrate_trajectory(beam, uniform(Vec3{0, 0, field}), dt, 2000, cgs, 10);

    // circumcenter of three samples, then the distance of every sample from it
    const Vec3 a = traj.samples[0].position, b = traj.samples[50].position, c = traj.samples[120].position;
    const Vec3 ab = b - a, ac = c - a, n = ab.cross(ac);
    const Vec3 center = a + (ac.squaredNorm() * n.cross(ab) + ab.squaredNorm() * ac.cross(n)) / (2 * n.squaredNorm());
    for (const auto& s : traj.samples) CHECK_THAT((s.position - center).norm(), WithinRel(radius, 1e-6));
    for (const auto& s : traj.samples) CHECK_THAT(s.velocity.norm(), WithinRel(beam.speed, 1e-9));
}

TEST_CASE("RK4 converges at fourth order") {
    const auto g = solve_magnetic_charge(2, cgs);
    const double field = 1e4 * cgs.volt_per_cm();
    const auto beam = beam_along(Vec3::Zero(), Vec3::UnitX(), g);
    const double big_omega = g.g * field / (beam.mass * cgs.speed_of_light);
    const double r = beam.speed / big_omega;
    const double t_end = 2 * pi / big_omega;
    // positive charge, E along +z: counterclockwise about z
    const Vec3 exact{r * std::sin(big_omega * t_end), r * (1 - std::cos(big_omega * t_end)), 0};
    auto error = [&](long steps) {
        const auto t = integrate_trajectory(beam, uniform(Vec3{0, 0, field}), t_end / steps, steps, cgs, steps);
        return (t.samples.back().position - exact).norm();
    };
    const double e1 = error(64), e2 = error(128), e3 = error(256);
    INFO("errors " << e1 << " " << e2 << " " << e3);
    CHECK(std::log2(e1 / e2) >= 3.8);
    CHECK(std::log2(e1 / e2) <= 4.2);
    CHECK(std::log2(e2 / e3) >= 3.8);
    CHECK(std::log2(e2 / e3) <= 4.2);
}

TEST_CASE("opposite charges follow mirror trajectories") {
    const Scenario s = parse_scenario(default_scenario_json());
    const auto g = solve_magnetic_charge(2, cgs);
    BeamSpec plus = s.beam, minus = s.beam;
    plus.charge = g;
    minus.charge = MagneticCharge{-g.g, 2};
    const auto tp = integrate_trajectory(plus, s.region, s.dt, 200000, cgs, 100);
    const auto tm = integrate_trajectory(minus, s.region, s.dt, 200000, cgs, 100);
    REQUIRE(tp.samples.size() == tm.samples.size());
    // v0 and E span the xz plane; the mirror flips y.
    double worst = 0, worst_speed = 0;
    for (std::size_t k = 0; k < tp.samples.size(); ++k) {
        const Vec3 mp = tp.samples[k].position, mm = tm.samples[k].position;
        worst = std::max({worst, std::abs(mp.x() - mm.x()), std::abs(mp.y() + mm.y()), std::abs(mp.z() - mm.z())});
        if (s.region.contains(mp))
            worst_speed = std::max(worst_speed, std::abs(tp.samples[k].velocity.norm() - s.beam.speed) / s.beam.speed);
    }
    CHECK(worst <= 1e-12);
    CHECK(worst_speed <= 1e-9);
    CHECK(std::abs(tp.samples.back().position.y()) > 1e-6);
}

TEST_CASE("beam separation") {
    const auto g = solve_magnetic_charge(2, cgs);
    const Scenario s = parse_scenario(default_scenario_json());
    BeamSpec plus = s.beam, minus = s.beam;
    plus.charge = g;
    minus.charge = MagneticCharge{-g.g, 2};
    const auto tp = integrate_trajectory(plus, s.region, s.dt, 600000, cgs, 50);
    const auto tm = integrate_trajectory(minus, s.region, s.dt, 600000, cgs, 50);
    const double z = 3.0;
    CHECK(beam_separation(tp, tp, z) == 0.0);
    const Vec3 cross = plane_crossing(tp, z);
    CHECK_THAT(beam_separation(tp, tm, z), WithinRel(2 * std::abs(cross.y()), 1e-9));

    FieldRegion off = s.region;
    off.field = Vec3::Zero();
    const auto fp = integrate_trajectory(plus, off, s.dt, 600000, cgs, 50);
    const auto fm = integrate_trajectory(minus, off, s.dt, 600000, cgs, 50);
    CHECK(beam_separation(fp, fm, z) == 0.0);
    CHECK_THROWS_AS(plane_crossing(tp, 1e3), NoCrossingError);
}

TEST_CASE("nonrelativistic guard and input validation") {
    const auto g = solve_magnetic_charge(2, cgs);
    auto fast = beam_along(Vec3::Zero(), Vec3::UnitZ(), g, 0.02 * cgs.speed_of_light);
    CHECK_THROWS_AS(integrate_trajectory(fast, uniform(Vec3::Zero()), 1e-9, 10, cgs), DomainError);
    auto ok = beam_along(Vec3::Zero(), Vec3::UnitZ(), g);
    CHECK_THROWS_AS(integrate_trajectory(ok, uniform(Vec3::Zero()), 0.0, 10, cgs), DomainError);
    CHECK_THROWS_AS(integrate_trajectory(ok, uniform(Vec3::Zero()), 1e-9, 0, cgs), DomainError);
    auto still = ok;
    still.direction = Vec3::Zero();
    CHECK_THROWS_AS(integrate_trajectory(still, uniform(Vec3::Zero()), 1e-9, 10, cgs), DomainError);
    FieldRegion flat;
    flat.lower = Vec3{0, 0, 0};
    flat.upper = Vec3{1, 1, 0};
    CHECK_THROWS_AS(integrate_trajectory(ok, flat, 1e-9, 10, cgs), DomainError);
}

TEST_CASE("solid-angle oracle sweeps 4 pi through the disk") {
    const RingDetector ring{1.0, Vec3{0, 0, 12}, Vec3::UnitZ()};
    const double d = unwrapped_solid_angle_change(ring, ring.center, Vec3::UnitZ(), 1e4);
    CHECK_THAT(d, WithinRel(4 * pi, 1e-6));
    const double miss = unwrapped_solid_angle_change(ring, ring.center + Vec3{3, 0, 0}, Vec3::UnitZ(), 1e4);
    CHECK_THAT(miss, WithinAbs(0.0, 1e-6));
}

TEST_CASE("ring flux is topological") {
    const auto g = solve_magnetic_charge(2, cgs);
    struct Geometry {
        double radius;
        Vec3 normal;
        Vec3 offset;
        Vec3 dir;
    };
    const double s30 = std::sin(pi / 6), c30 = std::cos(pi / 6);
    const std::vector<Geometry> cases{
        {1.0, Vec3::UnitZ(), Vec3::Zero(), Vec3::UnitZ()},
        {1.0, Vec3::UnitZ(), Vec3{0.5, 0, 0}, Vec3::UnitZ()},
        {1.0, Vec3::UnitZ(), Vec3{0, -0.5, 0}, Vec3{s30, 0, c30}},
        {2.5, Vec3::UnitZ(), Vec3{0.3, 0.9, 0}, Vec3{0.2, -0.6, 0.77}.normalized()},
        {0.4, Vec3{1, 1, 1}.normalized(), Vec3::Zero(), Vec3{1, 0.9, 1.2}.normalized()},
        {1.0, Vec3::UnitZ(), Vec3::Zero(), -Vec3::UnitZ()},
    };
    for (const auto& geo : cases) {
        RingDetector ring{geo.radius, Vec3{0, 0, 12}, geo.normal};
        const Vec3 offset = geo.offset - geo.normal.dot(geo.offset) * geo.normal;
        const Vec3 through = ring.center + offset;
        const double reach = 1e4 * geo.radius;
        const auto ev = ring_flux_event(straight_path(through, geo.dir, 20 * geo.radius, 4001), ring, g, cgs);
        const double oracle = g.g * unwrapped_solid_angle_change(ring, through, geo.dir, reach);
        INFO("radius " << geo.radius << " offset " << offset.transpose());
        REQUIRE(ev.crossings.size() == 1);
        CHECK_THAT(ev.flux, WithinRel(oracle, 1e-6));
        CHECK_THAT(std::abs(ev.flux), WithinRel(4 * pi * g.g, 1e-15));
        CHECK_THAT(ev.crossings[0].offset, WithinAbs(offset.norm(), 1e-9));
    }
}

TEST_CASE("ring flux: misses and round trips") {
    const auto g = solve_magnetic_charge(2, cgs);
    const RingDetector ring{1.0, Vec3{0, 0, 12}, Vec3::UnitZ()};
    const auto miss = ring_flux_event(straight_path(Vec3{0, 1.5, 12}, Vec3::UnitZ(), 10, 101), ring, g, cgs);
    CHECK(miss.flux == 0.0);
    CHECK(miss.crossings.empty());
    // through and back again: net zero
    Trajectory loop = straight_path(ring.center, Vec3::UnitZ(), 5, 100);
    auto back = straight_path(ring.center + Vec3{0.2, 0, 0}, -Vec3::UnitZ(), 5, 100);
    for (auto s : back.samples) {
        s.t += 101;
        loop.samples.push_back(s);
    }
    const auto two = ring_flux_event(loop, ring, g, cgs);
    CHECK(two.crossings.size() == 2);
    CHECK(two.flux == 0.0);
}

TEST_CASE("ring flux refuses unresolved turnarounds") {
    const auto g = solve_magnetic_charge(2, cgs);
    const RingDetector ring{1.0, Vec3{0, 0, 0}, Vec3::UnitZ()};
    Trajectory t;
    t.samples.push_back({0.0, Vec3{0, 0, -0.01}, Vec3{0, 0, 1}});
    t.samples.push_back({1.0, Vec3{0.02, 0, -0.01}, Vec3{0, 0, -1}});
    CHECK_THROWS_AS(ring_flux_event(t, ring, g, cgs), ResolutionError);
    RingDetector bad = ring;
    bad.normal = Vec3{0, 0, 2};
    CHECK_THROWS_AS(ring_flux_event(t, bad, g, cgs), DomainError);
}

TEST_CASE("SQUID signal in flux quanta") {
    CHECK_THAT(squid_signal(4 * pi * solve_magnetic_charge(2, cgs).g, cgs), WithinRel(8 * std::sqrt(3.0), 1e-12));
    CHECK_THAT(squid_signal(4 * pi * solve_magnetic_charge(2, cgs).g, cgs), WithinAbs(13.856, 1e-3));
    CHECK_THAT(squid_signal(4 * pi * dirac_charge(1, cgs).g, cgs), WithinRel(2.0, 1e-15));
    CHECK(squid_signal(0.0, cgs) == 0.0);
    for (int n = 1; n <= 10; ++n) {
        const double ratio = squid_signal(4 * pi * solve_magnetic_charge(n, cgs).g, cgs)
                             / squid_signal(4 * pi * dirac_charge(1, cgs).g, cgs);
        CHECK_THAT(ratio, WithinRel(2 * std::sqrt(3.0) * n, 1e-12));
    }
    CHECK_THAT(flux_quantum(cgs), WithinRel(2.0678338484e-7, 1e-9));
}

TEST_CASE("default scenario end to end") {
    const auto start = std::chrono::steady_clock::now();
    const Scenario s = parse_scenario(default_scenario_json());
    const auto r = run_experiment(s);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(seconds < 5.0);
    CHECK(r.excitation.two_photon_matches);
    CHECK(r.plus.ring.crossings.size() == 1);
    CHECK(r.minus.ring.crossings.size() == 1);
    CHECK_THAT(r.plus.squid_phi0, WithinRel(8 * std::sqrt(3.0), 1e-12));
    CHECK_THAT(r.minus.squid_phi0, WithinRel(-8 * std::sqrt(3.0), 1e-12));
    CHECK(r.separation > 0.0);
    CHECK(r.plus.max_speed_drift < 1e-9);
    const Vec3 a = plane_crossing(r.plus.trajectory, s.plane_z), b = plane_crossing(r.minus.trajectory, s.plane_z);
    CHECK_THAT(a.x(), WithinAbs(b.x(), 1e-12));
    CHECK_THAT(a.y(), WithinAbs(-b.y(), 1e-12));
}
