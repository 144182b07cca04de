#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace oscint {

struct Rule1D {
    std::vector<double> x;
    std::vector<double> w;
};

namespace detail {

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on the
// three-term recurrence.
inline Rule1D build_gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
    Rule1D r;
    r.x.resize(n);
    r.w.resize(n);
    const int m = (n + 1) / 2;
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        r.x[i] = -z;
        r.x[n - 1 - i] = z;
        r.w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        r.w[n - 1 - i] = r.w[i];
    }
    return r;
}

// Eigenvalues of a symmetric tridiagonal matrix (diagonal d, subdiagonal e)
// by QL with implicit shifts; d is overwritten with the eigenvalues.
inline void tridiag_eigenvalues(std::vector<double>& d, std::vector<double>& e) {
    const int n = static_cast<int>(d.size());
    e.resize(n, 0.0);
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= 1e-16 * dd) break;
            }
            if (m != l) {
                if (iter++ == 100)
                    throw std::runtime_error("tridiag_eigenvalues: no convergence");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i], b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

// Gauss-Hermite (weight e^{-x^2}): nodes are the Jacobi-matrix eigenvalues
// (Golub-Welsch), polished by one Newton step; weights from the Christoffel
// sum. The orthonormal polynomials grow like e^{z^2/2} near the largest
// roots, so the recurrence runs in a rescaled frame: values are divided down
// whenever they pass 1e100 and the log of the total scale is tracked.
// Weight underflow to 0 at extreme nodes is harmless (true values < 1e-300).
inline Rule1D build_gauss_hermite(int n) {
    if (n < 1) throw std::invalid_argument("gauss_hermite: order must be >= 1");
    std::vector<double> d(n, 0.0), e(n, 0.0);
    for (int j = 1; j < n; ++j) e[j - 1] = std::sqrt(0.5 * j);
    tridiag_eigenvalues(d, e);
    std::sort(d.begin(), d.end());

    Rule1D r;
    r.x.resize(n);
    r.w.resize(n);
    const double pim4 = 0.7511255444649424828587030047762; // pi^{-1/4}
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = d[n - 1 - i];
        double csum = 0.0, logscale = 0.0;
        for (int polish = 0; polish < 3; ++polish) {
            double p0 = pim4, p1 = 0.0;
            csum = p0 * p0;
            logscale = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = z * std::sqrt(2.0 / (j + 1.0)) * p1 - std::sqrt(j / (j + 1.0)) * p2;
                if (j + 1 < n) csum += p0 * p0;
                if (std::abs(p0) > 1e100) {
                    p0 *= 1e-100;
                    p1 *= 1e-100;
                    csum *= 1e-200;
                    logscale += 230.25850929940456840; // ln(1e100)
                }
            }
            double dz = p0 / (std::sqrt(2.0 * n) * p1);
            z -= dz;
            if (std::abs(dz) < 1e-15 * (1.0 + std::abs(z))) break;
        }
        r.x[n - 1 - i] = z;
        r.x[i] = -z;
        double w = std::exp(-2.0 * logscale) / csum;
        r.w[n - 1 - i] = w;
        r.w[i] = w;
    }
    if (n % 2 == 1) r.x[n / 2] = 0.0;
    return r;
}

template <typename Builder>
inline const Rule1D& cached_rule(std::map<int, Rule1D>& cache, std::mutex& mu,
                                 int n, Builder build) {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build(n)).first;
    return it->second;
}

} // namespace detail

inline const Rule1D& gauss_legendre(int n) {
    static std::map<int, Rule1D> cache;
    static std::mutex mu;
    return detail::cached_rule(cache, mu, n, detail::build_gauss_legendre);
}

inline const Rule1D& gauss_hermite(int n) {
    static std::map<int, Rule1D> cache;
    static std::mutex mu;
    return detail::cached_rule(cache, mu, n, detail::build_gauss_hermite);
}

} // namespace oscint
