#pragma once

#include <cmath>

namespace monostark {

/// Generalized Laguerre polynomial L_p^k(x) by the three-term recurrence
///   (j+1) L_{j+1} = (2j+1+k-x) L_j - (j+k) L_{j-1}.
inline double laguerre(int p, double k, double x) {
    if (p < 0) return 0.0;
    double prev = 1.0;
    if (p == 0) return prev;
    double cur = 1.0 + k - x;
    for (int j = 1; j < p; ++j) {
        const double next = ((2.0 * j + 1.0 + k - x) * cur - (j + k) * prev) / (j + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

/// d/dx L_p^k(x) = -L_{p-1}^{k+1}(x)
inline double laguerre_derivative(int p, double k, double x) {
    return p == 0 ? 0.0 : -laguerre(p - 1, k + 1.0, x);
}

} // namespace monostark
