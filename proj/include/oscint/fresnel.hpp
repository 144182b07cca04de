#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "oscint/gauss.hpp"

namespace oscint {

namespace detail {

// integral of e^{iy^2} over [u, infinity) for u >= 8, by the integration-
// by-parts asymptotic series; first neglected term < 1e-9 at the crossover.
inline std::complex<double> fresnel_exp_tail(double u) {
    const std::complex<double> I{0.0, 1.0};
    std::complex<double> c{1.0, 0.0};
    std::complex<double> sum{0.0, 0.0};
    double upow = u;
    for (int m = 0; m < 12; ++m) {
        sum += c / upow;
        c *= (2.0 * m + 1.0) / (2.0 * I);
        upow *= u * u;
    }
    return -std::exp(I * (u * u)) / (2.0 * I) * sum;
}

// C(u) = integral of cos(y^2) over [0, u], u >= 0
inline double fresnel_cos_primitive(double u) {
    const double cross = 8.0;
    const double half_sqrt_pi_over_2 = 0.62665706865775012560; // sqrt(pi/8)
    if (u > cross) return half_sqrt_pi_over_2 - fresnel_exp_tail(u).real();

    // phase y^2 varies by < 8 rad per panel of width 0.5 below the crossover
    const Rule1D& rule = gauss_legendre(16);
    int npanels = std::max(1, static_cast<int>(std::ceil(u / 0.5)));
    double h = u / npanels;
    double acc = 0.0;
    for (int pnl = 0; pnl < npanels; ++pnl) {
        double mid = (pnl + 0.5) * h, half = 0.5 * h;
        for (std::size_t i = 0; i < rule.x.size(); ++i) {
            double y = mid + half * rule.x[i];
            acc += half * rule.w[i] * std::cos(y * y);
        }
    }
    return acc;
}

} // namespace detail

// E(u) = integral of e^{iy^2} over [0, u]; odd in u; absolute accuracy ~1e-9
inline std::complex<double> fresnel_exp_primitive(double u) {
    const double au = std::abs(u);
    std::complex<double> e;
    if (au > 8.0) {
        // E(inf) = sqrt(pi/8) * (1 + i)
        const std::complex<double> e_inf{0.62665706865775012560, 0.62665706865775012560};
        e = e_inf - detail::fresnel_exp_tail(au);
    } else {
        const Rule1D& rule = gauss_legendre(16);
        int npanels = std::max(1, static_cast<int>(std::ceil(au / 0.5)));
        double h = au / npanels;
        std::complex<double> acc{0.0, 0.0};
        for (int pnl = 0; pnl < npanels; ++pnl) {
            double mid = (pnl + 0.5) * h, half = 0.5 * h;
            for (std::size_t i = 0; i < rule.x.size(); ++i) {
                double y = mid + half * rule.x[i];
                double y2 = y * y;
                acc += half * rule.w[i] * std::complex<double>(std::cos(y2), std::sin(y2));
            }
        }
        e = acc;
    }
    return u >= 0.0 ? e : -e;
}

// integral of cos(y^2) over [u1, u2]; absolute accuracy <= 1e-9
inline double fresnel_cos_segment(double u1, double u2) {
    if (u1 > u2) throw std::invalid_argument("fresnel_cos_segment: requires u1 <= u2");
    auto C = [](double u) {
        return u >= 0.0 ? detail::fresnel_cos_primitive(u)
                        : -detail::fresnel_cos_primitive(-u);
    };
    return C(u2) - C(u1);
}

// inf over lambda in [lambda0, 1e6*lambda0] (log grid) of
// |integral of cos(y^2) over [d1*sqrt(lambda), d2*sqrt(lambda)]|
inline double fresnel_floor_constant(double delta1, double delta2, double lambda0,
                                     int grid_points = 200) {
    if (!(delta1 < 0.0)) throw std::invalid_argument("fresnel_floor_constant: delta1 must be < 0");
    if (!(delta2 > 0.5)) throw std::invalid_argument("fresnel_floor_constant: delta2 must be > 1/2");
    if (!(lambda0 > 0.0)) throw std::invalid_argument("fresnel_floor_constant: lambda0 must be > 0");
    if (grid_points < 2) throw std::invalid_argument("fresnel_floor_constant: grid too small");
    double inf = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid_points; ++i) {
        double lam = lambda0 * std::pow(1e6, static_cast<double>(i) / (grid_points - 1));
        double s = std::sqrt(lam);
        inf = std::min(inf, std::abs(fresnel_cos_segment(delta1 * s, delta2 * s)));
    }
    return inf;
}

} // namespace oscint
