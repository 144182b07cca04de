#pragma once

#include <cmath>

namespace oscint {

// J1 by power series for |x| <= 12 and the Hankel asymptotic expansion
// beyond; absolute accuracy ~1e-10 over the real line.
inline double bessel_j1(double x) {
    double ax = std::abs(x);
    double sign = x < 0.0 ? -1.0 : 1.0;
    if (ax <= 12.0) {
        double term = 0.5 * ax;
        double sum = term;
        double q = 0.25 * ax * ax;
        for (int m = 1; m <= 60; ++m) {
            term *= -q / (m * (m + 1.0));
            sum += term;
            if (std::abs(term) < 1e-18 * (1.0 + std::abs(sum))) break;
        }
        return sign * sum;
    }
    // Hankel: J1 = sqrt(2/(pi x)) (P cos w - Q sin w), w = x - 3pi/4, mu = 4
    const double mu = 4.0;
    double t = 1.0;
    double P = 1.0, Q = 0.0;
    for (int m = 1; m <= 12; ++m) {
        double odd = 2.0 * m - 1.0;
        t *= (mu - odd * odd) / (8.0 * ax * m);
        switch (m % 4) {
            case 1: Q += t; break;
            case 2: P -= t; break;
            case 3: Q -= t; break;
            case 0: P += t; break;
        }
    }
    double w = ax - 2.356194490192344928846982537460; // 3*pi/4
    double amp = std::sqrt(2.0 / (3.14159265358979323846 * ax));
    return sign * amp * (P * std::cos(w) - Q * std::sin(w));
}

} // namespace oscint
