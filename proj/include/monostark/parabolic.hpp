#pragma once

#include <cmath>
#include <complex>
#include <cstdlib>
#include <numbers>
#include <string>

#include "monostark/errors.hpp"
#include "monostark/laguerre.hpp"
#include "monostark/quadrature.hpp"
#include "monostark/units.hpp"

namespace monostark {

using Complex = std::complex<double>;

inline constexpr int max_principal = 10;

/// Parabolic quantum numbers (n1, n2, m); principal n = n1 + n2 + |m| + 1.
struct QuantumNumbers {
    int n1 = 0;
    int n2 = 0;
    int m = 0;

    int principal() const { return n1 + n2 + std::abs(m) + 1; }
    int abs_m() const { return std::abs(m); }

    friend bool operator==(const QuantumNumbers&, const QuantumNumbers&) = default;
};

inline std::string to_string(const QuantumNumbers& q) {
    return "(" + std::to_string(q.n1) + "," + std::to_string(q.n2) + "," + std::to_string(q.m) + ")";
}

inline void validate(const QuantumNumbers& q) {
    if (q.n1 < 0 || q.n2 < 0)
        throw DomainError("quantum numbers n1, n2 must be nonnegative, got " + to_string(q));
    if (q.principal() > max_principal)
        throw DomainError("principal quantum number above " + std::to_string(max_principal)
                          + " is not supported, got " + to_string(q));
}

/// xi = r + z, eta = r - z, phi azimuth.
struct ParabolicPoint {
    double xi = 0;
    double eta = 0;
    double phi = 0;
};

struct CartesianPoint {
    double x = 0;
    double y = 0;
    double z = 0;
};

inline ParabolicPoint to_parabolic(const CartesianPoint& p) {
    const double r = std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z);
    double phi = std::atan2(p.y, p.x);
    if (phi < 0) phi += 2.0 * std::numbers::pi;
    return {r + p.z, r - p.z, phi};
}

inline CartesianPoint to_cartesian(const ParabolicPoint& p) {
    const double rho = std::sqrt(p.xi * p.eta);
    return {rho * std::cos(p.phi), rho * std::sin(p.phi), 0.5 * (p.xi - p.eta)};
}

inline double radius(const ParabolicPoint& p) { return 0.5 * (p.xi + p.eta); }

namespace detail {

// sqrt(p! / (p+k)!)
inline double laguerre_norm(int p, int k) {
    double prod = 1.0;
    for (int j = p + 1; j <= p + k; ++j) prod *= j;
    return 1.0 / std::sqrt(prod);
}

struct FactorValue {
    double value;
    double derivative;
};

// f(x) = sqrt(p!/(p+k)!) L_p^k(x) e^{-x/2} x^{k/2}, and df/dx.
inline FactorValue separated_factor(int p, int k, double x) {
    const double norm = laguerre_norm(p, k);
    const double lag = laguerre(p, k, x);
    const double dlag = laguerre_derivative(p, k, x);
    const double ex = std::exp(-0.5 * x);
    const double xk = k == 0 ? 1.0 : std::pow(x, 0.5 * k);
    double d = xk * (dlag - 0.5 * lag);
    if (k != 0) d += 0.5 * k * std::pow(x, 0.5 * k - 1.0) * lag;
    return {norm * lag * ex * xk, norm * ex * d};
}

} // namespace detail

/// The real (xi, eta) factor of a Stark eigenfunction and its partial derivatives.
/// psi = value * e^{i m phi}; the 1/sqrt(2 pi) azimuthal normalization is included.
struct RealAmplitude {
    double value = 0;
    double d_xi = 0;
    double d_eta = 0;
};

inline RealAmplitude real_amplitude(const QuantumNumbers& q, double xi, double eta, const Constants& c) {
    validate(q);
    const int n = q.principal();
    const int k = q.abs_m();
    const double a0 = c.bohr_radius;
    const double len = n * a0;
    const double pref = std::numbers::sqrt2 / (n * n) / std::pow(a0, 1.5)
                        / std::sqrt(2.0 * std::numbers::pi);
    const auto f1 = detail::separated_factor(q.n1, k, xi / len);
    const auto f2 = detail::separated_factor(q.n2, k, eta / len);
    return {pref * f1.value * f2.value, pref * f1.derivative * f2.value / len,
            pref * f1.value * f2.derivative / len};
}

/// Normalized Stark eigenfunction psi_{n1 n2 m} at p, with
/// int |psi|^2 (xi+eta)/4 dxi deta dphi = 1.
inline Complex parabolic_wavefunction(const QuantumNumbers& q, const ParabolicPoint& p, const Constants& c) {
    if (!(p.xi >= 0) || !(p.eta >= 0)) throw DomainError("parabolic_wavefunction: xi and eta must be >= 0");
    const double r = real_amplitude(q, p.xi, p.eta, c).value;
    return r * std::polar(1.0, q.m * p.phi);
}

/// Field-free level -e^2 / (2 a0 n^2).
inline double bound_energy(int n, const Constants& c) {
    if (n < 1) throw DomainError("bound_energy: n must be >= 1");
    return -c.elementary_charge * c.elementary_charge / (2.0 * c.bohr_radius * n * n);
}

/// Which pieces of H0 apply_h0 evaluates.
struct H0Terms {
    bool centrifugal = true;
    bool coulomb = true;
};

/// Second-order central finite-difference evaluation of
///   H0 = -hbar^2/2m { 4/(xi+eta) [d_xi(xi d_xi) + d_eta(eta d_eta)] + 1/(xi eta) d_phi^2 }
///        - 2 e^2 / (xi+eta)
/// applied to `state` at p. The azimuthal step is h / a0 radians so that all
/// truncation errors scale as h^2.
template <class StateFn>
auto apply_h0(StateFn&& state, const ParabolicPoint& p, const Constants& c, double h, H0Terms terms = {}) {
    if (!(h > 0)) throw DomainError("apply_h0: step must be positive");
    if (!(p.xi > 2.0 * h) || !(p.eta > 2.0 * h))
        throw DomainError("apply_h0: point too close to the z-axis for the stencil (need xi, eta > 2h)");

    const auto f0 = state(p);
    const auto fxp = state(ParabolicPoint{p.xi + h, p.eta, p.phi});
    const auto fxm = state(ParabolicPoint{p.xi - h, p.eta, p.phi});
    const auto fep = state(ParabolicPoint{p.xi, p.eta + h, p.phi});
    const auto fem = state(ParabolicPoint{p.xi, p.eta - h, p.phi});

    const double h2 = h * h;
    const auto d_xi = ((p.xi + 0.5 * h) * (fxp - f0) - (p.xi - 0.5 * h) * (f0 - fxm)) / h2;
    const auto d_eta = ((p.eta + 0.5 * h) * (fep - f0) - (p.eta - 0.5 * h) * (f0 - fem)) / h2;

    const double kin = -c.hbar * c.hbar / (2.0 * c.electron_mass);
    const double sum = p.xi + p.eta;
    auto out = kin * (4.0 / sum) * (d_xi + d_eta);
    if (terms.centrifugal) {
        const double dphi = h / c.bohr_radius;
        const auto fpp = state(ParabolicPoint{p.xi, p.eta, p.phi + dphi});
        const auto fpm = state(ParabolicPoint{p.xi, p.eta, p.phi - dphi});
        out += kin / (p.xi * p.eta) * (fpp - 2.0 * f0 + fpm) / (dphi * dphi);
    }
    if (terms.coulomb) out += -2.0 * c.elementary_charge * c.elementary_charge / sum * f0;
    return out;
}

/// Default rule for states of principal number n: node scale n * a0.
inline QuadratureRule rule_for(int n, const Constants& c, int order = 80) {
    return gauss_laguerre(order, n * c.bohr_radius);
}

/// <a|b> with the azimuthal integral done analytically.
inline double overlap(const QuantumNumbers& a, const QuantumNumbers& b, const QuadratureRule& rule,
                      const Constants& c) {
    validate(a);
    validate(b);
    if (a.m != b.m) return 0.0;
    const double two_pi = 2.0 * std::numbers::pi;
    return integrate(
        [&](double xi, double eta) {
            return two_pi * 0.25 * (xi + eta) * real_amplitude(a, xi, eta, c).value
                   * real_amplitude(b, xi, eta, c).value;
        },
        rule);
}

inline double norm(const QuantumNumbers& q, const QuadratureRule& rule, const Constants& c) {
    return overlap(q, q, rule, c);
}

} // namespace monostark
