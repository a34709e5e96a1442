#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "monostark/errors.hpp"
#include "monostark/parabolic.hpp"
#include "monostark/quadrature.hpp"
#include "monostark/units.hpp"

namespace monostark {

/// Integration measure used for the energy-shift matrix element.
///   paper_literal:      flat dxi deta, psi taken at phi = 0
///   measure_consistent: the normalized volume element (xi+eta)/4 dxi deta dphi
enum class MeasureMode { paper_literal, measure_consistent };

inline std::string_view to_string(MeasureMode m) {
    return m == MeasureMode::paper_literal ? "paper_literal" : "measure_consistent";
}

inline std::optional<MeasureMode> parse_measure_mode(std::string_view s) {
    if (s == "paper_literal" || s == "paper-literal") return MeasureMode::paper_literal;
    if (s == "measure_consistent" || s == "measure-consistent") return MeasureMode::measure_consistent;
    return std::nullopt;
}

/// Fields above this fraction of e/a0^2 are flagged as outside first-order validity.
inline constexpr double perturbative_field_fraction = 1e-3;

/// Uniform field along +z.
struct StarkConfig {
    double field_strength = 0;
    bool perturbative = true;
};

inline StarkConfig make_stark_config(double field_strength, const Constants& c) {
    if (!(field_strength >= 0)) throw DomainError("StarkConfig: field strength must be >= 0");
    return {field_strength, field_strength <= perturbative_field_fraction * c.atomic_field()};
}

struct MagneticCharge {
    double g = 0;
    int n = 0;

    double eg_over_hbar_c(const Constants& c) const { return g / c.hbar_c_over_e(); }
};

/// The charge for which the paper's stated monopole shift
///   dE = e g^2 lambda E / (2 hbar c) * (n1 - n2) / n
/// equals the linear Stark shift (3/2) n (n1 - n2) e E a0. Solving for g gives
///   g^2 = 3 n^2 a0 hbar c / lambda,
/// i.e. (e g / hbar c)^2 = 3 n^2 alpha a0 / lambda = 3 n^2.
inline MagneticCharge solve_magnetic_charge(int n, const Constants& c) {
    if (n < 1) throw DomainError("solve_magnetic_charge: n must be >= 1");
    const double g2 = 3.0 * n * n * c.bohr_radius * c.hbar * c.speed_of_light / c.compton_wavelength;
    return {std::sqrt(g2), n};
}

/// Dirac/Saha quantization e g / hbar c = k / 2.
inline MagneticCharge dirac_charge(int k, const Constants& c) {
    if (k < 1) throw DomainError("dirac_charge: k must be >= 1");
    return {0.5 * k * c.hbar_c_over_e(), k};
}

/// Field-free state carrying the logarithmic phase exp(i (eg/hbar c) F - i M phi),
/// F = log(xi eta / a0^2), M = base.m.
struct DressedState {
    QuantumNumbers base;
    MagneticCharge charge;
};

inline double phase_log(double xi, double eta, const Constants& c) {
    return std::log(xi * eta / (c.bohr_radius * c.bohr_radius));
}

/// Phase exponent (eg/hbar c) F - M phi, unwrapped.
inline double phase_exponent(const DressedState& ds, const ParabolicPoint& p, const Constants& c) {
    if (p.xi == 0) throw SingularityError(Axis::xi);
    if (p.eta == 0) throw SingularityError(Axis::eta);
    return ds.charge.eg_over_hbar_c(c) * phase_log(p.xi, p.eta, c) - ds.base.m * p.phi;
}

inline Complex dressed_wavefunction(const DressedState& ds, const ParabolicPoint& p, const Constants& c) {
    const double theta = phase_exponent(ds, p, c);
    return real_amplitude(ds.base, p.xi, p.eta, c).value * std::polar(1.0, theta);
}

/// Phi and its xi/eta partial derivatives at (xi, eta, phi).
struct DressedGradient {
    Complex value;
    Complex d_xi;
    Complex d_eta;
};

inline DressedGradient dressed_gradient(const DressedState& ds, const ParabolicPoint& p, const Constants& c) {
    const double theta = phase_exponent(ds, p, c);
    const double kappa = ds.charge.eg_over_hbar_c(c);
    const auto amp = real_amplitude(ds.base, p.xi, p.eta, c);
    const Complex ph = std::polar(1.0, theta);
    const Complex i{0.0, 1.0};
    return {amp.value * ph, (amp.d_xi + i * kappa * amp.value / p.xi) * ph,
            (amp.d_eta + i * kappa * amp.value / p.eta) * ph};
}

struct DipoleVector {
    double dx = 0;
    double dy = 0;
    double dz = 0;
};

/// <z> in the Stark state by quadrature (z = (xi - eta)/2).
inline double expectation_z(const QuantumNumbers& q, const QuadratureRule& rule, const Constants& c) {
    validate(q);
    const double two_pi = 2.0 * std::numbers::pi;
    return integrate(
        [&](double xi, double eta) {
            const double r = real_amplitude(q, xi, eta, c).value;
            return two_pi * 0.25 * (xi + eta) * r * r * 0.5 * (xi - eta);
        },
        rule);
}

/// (3/2) n (n1 - n2) a0
inline double expectation_z_closed_form(const QuantumNumbers& q, const Constants& c) {
    validate(q);
    return 1.5 * q.principal() * (q.n1 - q.n2) * c.bohr_radius;
}

/// d = e <r>. The transverse components vanish by the analytic azimuthal integral.
inline DipoleVector electric_dipole_conventional(const QuantumNumbers& q, const QuadratureRule& rule,
                                                 const Constants& c) {
    return {0.0, 0.0, c.elementary_charge * expectation_z(q, rule, c)};
}

/// Local magnetic current g L / (m c r) in the m-eigenstate: only the azimuthal
/// component survives, g hbar m |psi|^2 / (m c r) along phi-hat. Cartesian components.
inline Eigen::Vector3d magnetic_current(const QuantumNumbers& q, const MagneticCharge& g,
                                        const ParabolicPoint& p, const Constants& c) {
    const double r = radius(p);
    if (!(r > 0)) throw DomainError("magnetic_current: singular at r = 0");
    const double amp = real_amplitude(q, p.xi, p.eta, c).value;
    const double mag = g.g * c.hbar * q.m * amp * amp / (c.electron_mass * c.speed_of_light * r);
    return {-mag * std::sin(p.phi), mag * std::cos(p.phi), 0.0};
}

namespace detail {

// (1/4) * measure weight * xi eta / (xi + eta): the common integration kernel
// of both terms of the shift, with the azimuthal integral folded in.
inline double shift_kernel(MeasureMode mode, double xi, double eta) {
    const double k = xi * eta / (xi + eta);
    const double w = mode == MeasureMode::paper_literal ? 1.0 : 2.0 * std::numbers::pi * (xi + eta);
    return 0.25 * w * k;
}

} // namespace detail

/// z-component of the dipole defined through the magnetic current,
///   d_z = (i g lambda / 2) xi eta / (xi + eta) (dbar_xi - dbar_eta),
/// with a dbar b = a (d b) - (d a) b. Evaluated as <Phi|d_z|Phi> in the dressed
/// state carrying charge g, under the normalized volume measure.
inline DipoleVector dipole_from_magnetic_current(const QuantumNumbers& q, const MagneticCharge& g,
                                                 const QuadratureRule& rule, const Constants& c) {
    validate(q);
    if (g.g == 0) return {};
    const DressedState ds{q, g};
    const Complex i{0.0, 1.0};
    const Complex sum = integrate(
        [&](double xi, double eta) {
            const auto d = dressed_gradient(ds, ParabolicPoint{xi, eta, 0.0}, c);
            const Complex dphi = d.d_xi - d.d_eta;
            const Complex anti = std::conj(d.value) * dphi - std::conj(dphi) * d.value;
            return detail::shift_kernel(MeasureMode::measure_consistent, xi, eta) * anti;
        },
        rule);
    const Complex dz = 0.5 * i * g.g * c.compton_wavelength * sum;
    return {0.0, 0.0, dz.real()};
}

/// Both terms of the first-order shift <Phi|H_I|Phi>.
struct MonopoleShift {
    MeasureMode mode = MeasureMode::paper_literal;
    /// g-linear term, proportional to the matrix element of H_I in the undressed real psi.
    Complex first_term;
    /// |first-term integral| / integral of one of its cancelling halves.
    double first_term_relative = 0;
    /// g^2 term from the phase gradient.
    double second_term = 0;

    double energy() const { return second_term + first_term.real(); }
};

inline constexpr double first_term_tolerance = 1e-10;

namespace detail {

struct ShiftParts {
    double anti = 0;
    double half = 0;
    double phase = 0;
    ShiftParts& operator+=(const ShiftParts& o) {
        anti += o.anti;
        half += o.half;
        phase += o.phase;
        return *this;
    }
    bool finite() const { return std::isfinite(anti) && std::isfinite(half) && std::isfinite(phase); }
};

inline ShiftParts operator*(double s, const ShiftParts& p) { return {p.anti * s, p.half * s, p.phase * s}; }
inline ShiftParts operator*(const ShiftParts& p, double s) { return s * p; }

} // namespace detail

/// Energy shift of the dressed Stark state in the field:
///   first:  (i g lambda E / 2) (1/4) int dmu K psi (dbar_xi - dbar_eta) psi
///   second: -(e g^2 lambda E / (4 hbar c)) int dmu K psi (dF/dxi - dF/deta) psi
/// with K = xi eta / (xi + eta), dF/dxi = 1/xi, dF/deta = 1/eta. dmu follows `mode`.
/// Throws NumericalError if the first term fails to vanish.
inline MonopoleShift stark_shift_monopole(const QuantumNumbers& q, const StarkConfig& stark, const MagneticCharge& g,
                                          const QuadratureRule& rule, const Constants& c,
                                          MeasureMode mode = MeasureMode::paper_literal) {
    validate(q);
    const detail::ShiftParts parts = integrate(
        [&](double xi, double eta) {
            const auto a = real_amplitude(q, xi, eta, c);
            const double k = detail::shift_kernel(mode, xi, eta);
            const double dpsi = a.d_xi - a.d_eta;
            const double anti = a.value * dpsi - dpsi * a.value;
            const double phase = a.value * (1.0 / xi - 1.0 / eta) * a.value;
            return detail::ShiftParts{k * anti, k * std::abs(a.value * dpsi), k * phase};
        },
        rule);

    const double lam_e = c.compton_wavelength * stark.field_strength;
    MonopoleShift out;
    out.mode = mode;
    out.first_term = Complex{0.0, 0.5 * g.g * lam_e * parts.anti};
    out.first_term_relative = parts.half > 0 ? std::abs(parts.anti) / parts.half : 0.0;
    out.second_term = -c.elementary_charge * g.g * g.g * lam_e / c.hbar / c.speed_of_light * parts.phase;
    if (out.first_term_relative > first_term_tolerance)
        throw NumericalError("stark_shift_monopole: g-linear term does not vanish");
    return out;
}

/// Closed form stated for the monopole route: e g^2 lambda E / (2 hbar c) * (n1 - n2) / n.
inline double stark_shift_monopole_stated(const QuantumNumbers& q, const StarkConfig& stark, const MagneticCharge& g,
                                          const Constants& c) {
    validate(q);
    return c.elementary_charge * g.g * g.g * c.compton_wavelength * stark.field_strength
           / (2.0 * c.hbar * c.speed_of_light) * (q.n1 - q.n2) / q.principal();
}

/// Linear Stark shift (3/2) n (n1 - n2) e E a0.
inline double stark_shift_conventional(const QuantumNumbers& q, const StarkConfig& stark, const Constants& c) {
    validate(q);
    return 1.5 * q.principal() * (q.n1 - q.n2) * c.elementary_charge * stark.field_strength * c.bohr_radius;
}

/// As above, cross-checked against d . E from the quadrature dipole.
inline double stark_shift_conventional(const QuantumNumbers& q, const StarkConfig& stark, const QuadratureRule& rule,
                                       const Constants& c) {
    const double closed = stark_shift_conventional(q, stark, c);
    const double from_dipole = electric_dipole_conventional(q, rule, c).dz * stark.field_strength;
    const double scale = c.elementary_charge * stark.field_strength * c.bohr_radius;
    if (std::abs(closed - from_dipole) > 1e-8 * std::max(std::abs(closed), scale))
        throw NumericalError("stark_shift_conventional: closed form disagrees with d.E");
    return closed;
}

/// Radial profile of the surface term in the dipole identity at r = R.
struct SurfaceDecay {
    double radius = 0;
    double integrand = 0;
    double peak = 0;
    double ratio = 0;
    bool passes = false;
};

inline constexpr double surface_decay_threshold = 1e-12;

/// Surface integrand r |psi|^2 (maximized over polar angle) at r = R, relative
/// to its maximum over 0 < r <= R.
inline SurfaceDecay surface_term_decay(const QuantumNumbers& q, double big_r, const Constants& c) {
    validate(q);
    if (!(big_r > 0)) throw DomainError("surface_term_decay: radius must be positive");
    constexpr int n_theta = 181;
    auto profile = [&](double r) {
        double best = 0;
        for (int k = 0; k < n_theta; ++k) {
            const double ct = std::cos(std::numbers::pi * k / (n_theta - 1));
            const double a = real_amplitude(q, r * (1 + ct), r * (1 - ct), c).value;
            best = std::max(best, r * a * a);
        }
        return best;
    };
    constexpr int n_r = 4000;
    double peak = 0;
    for (int k = 1; k <= n_r; ++k) peak = std::max(peak, profile(big_r * k / n_r));
    SurfaceDecay out;
    out.radius = big_r;
    out.integrand = profile(big_r);
    out.peak = peak;
    out.ratio = out.integrand / peak;
    out.passes = out.ratio < surface_decay_threshold;
    return out;
}

/// Comparison of the two dipole definitions.
struct IdentityCheck {
    double dz_eq6 = 0;
    double dz_eq4 = 0;
    double residual = 0;
    SurfaceDecay surface;
};

inline constexpr double surface_check_radius_bohr = 40.0;

inline IdentityCheck identity_residual_eq9(const QuantumNumbers& q, const MagneticCharge& g,
                                           const QuadratureRule& rule, const Constants& c) {
    IdentityCheck out;
    out.dz_eq6 = electric_dipole_conventional(q, rule, c).dz;
    if (std::abs(out.dz_eq6) <= 1e-12 * c.elementary_charge * c.bohr_radius)
        throw DomainError("identity_residual_eq9: state " + to_string(q)
                          + " has zero dipole; residual undefined");
    out.dz_eq4 = dipole_from_magnetic_current(q, g, rule, c).dz;
    out.residual = std::abs(out.dz_eq6 - out.dz_eq4) / std::abs(out.dz_eq6);
    out.surface = surface_term_decay(q, surface_check_radius_bohr * c.bohr_radius, c);
    return out;
}

/// The charge at which the magnetic-current dipole equals e<z>. The dipole is
/// exactly quadratic in g, so one evaluation at the reference charge hbar c / e suffices.
inline MagneticCharge residual_zeroing_charge(const QuantumNumbers& q, const QuadratureRule& rule,
                                              const Constants& c) {
    const double d6 = electric_dipole_conventional(q, rule, c).dz;
    if (std::abs(d6) <= 1e-12 * c.elementary_charge * c.bohr_radius)
        throw DomainError("residual_zeroing_charge: state " + to_string(q) + " has zero dipole");
    const MagneticCharge ref{c.hbar_c_over_e(), q.principal()};
    const double d4 = dipole_from_magnetic_current(q, ref, rule, c).dz;
    const double ratio = d6 / d4;
    if (!(ratio > 0)) throw NumericalError("residual_zeroing_charge: dipoles have opposite sign, no real g");
    return {ref.g * std::sqrt(ratio), q.principal()};
}

/// Checks of the Eq-20 to Eq-21 reduction: the volume integrals of
/// psi (4/(xi+eta)) d psi/dxi and its eta counterpart, the boundary values
/// -(1/2) psi^2 they reduce to, and the pointwise identity d/dxi(xi dF/dxi) = 0.
struct PhaseTermCheck {
    double xi_integral = 0;
    double eta_integral = 0;
    double xi_boundary = 0;
    double eta_boundary = 0;
    double eq19_max_residual = 0;
};

inline PhaseTermCheck phase_term_expectation(const QuantumNumbers& q, const QuadratureRule& rule,
                                             const Constants& c, int eq19_samples = 64) {
    validate(q);
    const double two_pi = 2.0 * std::numbers::pi;
    PhaseTermCheck out;
    out.xi_integral = integrate(
        [&](double xi, double eta) {
            const auto a = real_amplitude(q, xi, eta, c);
            return two_pi * a.value * a.d_xi;
        },
        rule);
    out.eta_integral = integrate(
        [&](double xi, double eta) {
            const auto a = real_amplitude(q, xi, eta, c);
            return two_pi * a.value * a.d_eta;
        },
        rule);
    out.xi_boundary = -0.5 * two_pi * integrate_1d(
                                           [&](double eta) {
                                               const double a = real_amplitude(q, 0.0, eta, c).value;
                                               return a * a;
                                           },
                                           rule);
    out.eta_boundary = -0.5 * two_pi * integrate_1d(
                                            [&](double xi) {
                                                const double a = real_amplitude(q, xi, 0.0, c).value;
                                                return a * a;
                                            },
                                            rule);

    // xi * dF/dxi with dF/dxi = 1/xi, differentiated by central differences on a
    // deterministic spread of interior points.
    const double a0 = c.bohr_radius;
    const double h = 1e-3 * a0;
    for (int k = 0; k < eq19_samples; ++k) {
        const double xi = a0 * (0.05 + 0.37 * k);
        auto g = [](double x) { return x * (1.0 / x); };
        out.eq19_max_residual = std::max(out.eq19_max_residual, std::abs(g(xi + h) - g(xi - h)) / (2.0 * h) * a0);
    }
    return out;
}

/// Logarithmic divergence of the dressed phase along one half of the z-axis.
struct AxisDivergence {
    Axis axis = Axis::xi;
    /// d(phase)/d(log coordinate) fitted over the probes approaching the axis.
    double slope = 0;
    int probes = 0;
    bool singular = false;
    /// z < 0 for the xi-axis, z > 0 for the eta-axis.
    int z_sign = 0;
};

struct StringDiagnosis {
    AxisDivergence xi_axis;
    AxisDivergence eta_axis;
};

/// A probe approaches the xi = 0 line if xi <= ratio * eta (and vice versa).
inline constexpr double axis_approach_ratio = 0.2;

namespace detail {

inline double fit_slope(std::span<const double> x, std::span<const double> y) {
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

} // namespace detail

/// Measure the phase divergence on each half-axis from probe points. Probes
/// approaching the same axis should share the other coordinate and phi.
inline StringDiagnosis string_singularity(const DressedState& ds, std::span<const ParabolicPoint> probes,
                                          const Constants& c) {
    std::vector<double> lx, px, le, pe;
    for (const auto& p : probes) {
        if (p.xi > 0 && p.eta > 0 && p.xi <= axis_approach_ratio * p.eta) {
            lx.push_back(std::log(p.xi));
            px.push_back(phase_exponent(ds, p, c));
        } else if (p.xi > 0 && p.eta > 0 && p.eta <= axis_approach_ratio * p.xi) {
            le.push_back(std::log(p.eta));
            pe.push_back(phase_exponent(ds, p, c));
        } else {
            throw DomainError("string_singularity: probe does not approach either half-axis");
        }
    }
    auto distinct = [](const std::vector<double>& v) {
        return v.size() >= 2 && *std::max_element(v.begin(), v.end()) > *std::min_element(v.begin(), v.end());
    };
    if (!distinct(lx) || !distinct(le))
        throw DomainError("string_singularity: need at least two distinct probes per half-axis");

    auto make = [&](Axis axis, const std::vector<double>& l, const std::vector<double>& ph) {
        AxisDivergence d;
        d.axis = axis;
        d.slope = detail::fit_slope(l, ph);
        d.probes = static_cast<int>(l.size());
        d.singular = std::abs(d.slope) > 1e-9;
        d.z_sign = axis == Axis::xi ? -1 : +1;
        return d;
    };
    return {make(Axis::xi, lx, px), make(Axis::eta, le, pe)};
}

/// Probes at coordinate a0 * 10^{-k}, k = 1..levels, on both half-axes, with
/// the other coordinate fixed at `fixed`.
inline std::vector<ParabolicPoint> axis_probes(const Constants& c, int levels = 8, double fixed_bohr = 1.0,
                                               double phi = 0.0) {
    std::vector<ParabolicPoint> out;
    const double a0 = c.bohr_radius;
    for (int k = 1; k <= levels; ++k) out.push_back({a0 * std::pow(10.0, -k), fixed_bohr * a0, phi});
    for (int k = 1; k <= levels; ++k) out.push_back({fixed_bohr * a0, a0 * std::pow(10.0, -k), phi});
    return out;
}

} // namespace monostark
