#pragma once

#include <cmath>
#include <complex>
#include <sstream>
#include <type_traits>
#include <vector>

#include <Eigen/Eigenvalues>

#include "monostark/errors.hpp"

namespace monostark {

/// Gauss-Laguerre rule applied in both parabolic directions.
///
/// `abscissae`/`weights` are the standard rule for int_0^inf e^{-t} f(t) dt.
/// Physical nodes are `scale * t`, so that integrands decaying like
/// e^{-x/scale} are integrated exactly when the remaining factor is a
/// polynomial of degree < 2*order. `factored_weights` carry the e^{t} back in
/// so callers pass the full integrand.
struct QuadratureRule {
    int order = 0;
    double scale = 1.0;
    std::vector<double> abscissae;
    std::vector<double> weights;
    std::vector<double> factored_weights;

    double node(std::size_t i) const { return scale * abscissae[i]; }
    std::vector<double> nodes_xi() const { return scaled(); }
    std::vector<double> nodes_eta() const { return scaled(); }

private:
    std::vector<double> scaled() const {
        std::vector<double> out(abscissae.size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = node(i);
        return out;
    }
};

namespace detail {

struct LaguerrePair {
    long double value;
    long double previous;
};

// L_n(x) and L_{n-1}(x), ordinary (k = 0) Laguerre polynomials, in extended
// precision: the recurrence loses about n ulps near the nodes.
inline LaguerrePair laguerre_pair(int n, long double x) {
    long double prev = 1.0L;
    long double cur = 1.0L - x;
    if (n == 0) return {1.0L, 0.0L};
    for (int j = 1; j < n; ++j) {
        const long double next = ((2.0L * j + 1.0L - x) * cur - j * prev) / (j + 1.0L);
        prev = cur;
        cur = next;
    }
    return {cur, prev};
}

} // namespace detail

inline constexpr int max_quadrature_order = 256;

/// Build an order-`order` Gauss-Laguerre rule with node scaling `scale`.
/// Nodes come from the Golub-Welsch eigenproblem and are then polished by
/// Newton iteration; weights use x / ((n+1) L_{n+1}(x))^2, evaluated in log
/// space so that the far-tail weights keep full relative precision.
inline QuadratureRule gauss_laguerre(int order, double scale = 1.0) {
    if (order < 1 || order > max_quadrature_order)
        throw DomainError("gauss_laguerre: order must be in [1, 256]");
    if (!(scale > 0)) throw DomainError("gauss_laguerre: scale must be positive");

    const int n = order;
    Eigen::VectorXd diag(n);
    Eigen::VectorXd sub(n > 1 ? n - 1 : 0);
    for (int i = 0; i < n; ++i) diag[i] = 2.0 * i + 1.0;
    for (int i = 1; i < n; ++i) sub[i - 1] = i;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);

    QuadratureRule rule;
    rule.order = n;
    rule.scale = scale;
    rule.abscissae.resize(n);
    rule.weights.resize(n);
    rule.factored_weights.resize(n);
    for (int i = 0; i < n; ++i) {
        long double x = solver.eigenvalues()[i];
        for (int it = 0; it < 10; ++it) {
            const auto [ln, lnm1] = detail::laguerre_pair(n, x);
            const long double deriv = n * (ln - lnm1) / x;
            const long double dx = ln / deriv;
            x -= dx;
            if (std::abs(dx) <= 1e-18L * x) break;
        }
        const auto [lnp1, ln] = detail::laguerre_pair(n + 1, x);
        (void)ln;
        const long double log_w = std::log(x) - 2.0L * std::log((n + 1.0L) * std::abs(lnp1));
        rule.abscissae[i] = static_cast<double>(x);
        rule.weights[i] = static_cast<double>(std::exp(log_w));
        rule.factored_weights[i] = static_cast<double>(std::exp(log_w + x));
    }
    return rule;
}

namespace detail {

inline bool all_finite(double v) { return std::isfinite(v); }
inline bool all_finite(const std::complex<double>& v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
}

/// Aggregates of several integrands provide their own check.
template <class T>
auto all_finite(const T& v) -> decltype(v.finite()) {
    return v.finite();
}

[[noreturn]] inline void non_finite_at(double xi, double eta) {
    std::ostringstream os;
    os.precision(17);
    os << "integrate: non-finite integrand at node (xi=" << xi << ", eta=" << eta << ")";
    throw NumericalError(os.str());
}

} // namespace detail

/// Integral over xi, eta in [0, inf) of `fn(xi, eta)` by the product rule.
/// `fn` is the full integrand (no exponential divided out); any measure
/// factor such as (xi+eta)/4 is the caller's to include.
template <class Fn>
auto integrate(Fn&& fn, const QuadratureRule& rule) {
    using Value = std::decay_t<decltype(fn(1.0, 1.0))>;
    Value total{};
    const std::size_t n = rule.abscissae.size();
    const double s2 = rule.scale * rule.scale;
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = rule.node(i);
        Value row{};
        for (std::size_t j = 0; j < n; ++j) {
            const double eta = rule.node(j);
            const Value v = fn(xi, eta);
            if (!detail::all_finite(v)) detail::non_finite_at(xi, eta);
            row += rule.factored_weights[j] * v;
        }
        total += rule.factored_weights[i] * row;
    }
    return total * s2;
}

/// One-dimensional counterpart: integral over [0, inf) of fn(x).
template <class Fn>
auto integrate_1d(Fn&& fn, const QuadratureRule& rule) {
    using Value = std::decay_t<decltype(fn(1.0))>;
    Value total{};
    for (std::size_t i = 0; i < rule.abscissae.size(); ++i) {
        const double x = rule.node(i);
        const Value v = fn(x);
        if (!detail::all_finite(v)) detail::non_finite_at(x, 0.0);
        total += rule.factored_weights[i] * v;
    }
    return total * rule.scale;
}

} // namespace monostark
