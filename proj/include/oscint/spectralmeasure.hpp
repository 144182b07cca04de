#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "oscint/closedform.hpp"
#include "oscint/gauss.hpp"
#include "oscint/oscquad.hpp"
#include "oscint/parallel.hpp"
#include "oscint/powerlaw.hpp"
#include "oscint/rng.hpp"
#include "oscint/symlin.hpp"

namespace oscint {

inline double p0_affine(int k) {
    if (k < 1) throw std::invalid_argument("p0_affine: k must be >= 1");
    return 2.0 * k + 2.0;
}

inline double p0_homogeneous(int k) {
    if (k < 1) throw std::invalid_argument("p0_homogeneous: k must be >= 1");
    return 2.0 * k;
}

// Growth of the eigenvalue integrand along one ray lambda_1 = t -> infinity:
// Vandermonde contributes t^{k-1}, the damping t^{-(p-2)/2}. Integrable over
// the ray iff this is < -1, i.e. p > 2k+2.
inline double tail_exponent_analytic(int k, double p) {
    if (k < 1) throw std::invalid_argument("tail_exponent_analytic: k must be >= 1");
    if (!(p > 2.0)) throw std::invalid_argument("tail_exponent_analytic: p must be > 2");
    return (k - 1) - (p - 2.0) / 2.0;
}

inline PowerLawFit tail_exponent_numeric(int k, double p,
                                         const std::vector<double>& lambda_rest) {
    if (k < 1) throw std::invalid_argument("tail_exponent_numeric: k must be >= 1");
    if (!(p > 2.0)) throw std::invalid_argument("tail_exponent_numeric: p must be > 2");
    if (lambda_rest.size() != static_cast<std::size_t>(k - 1))
        throw std::invalid_argument("tail_exponent_numeric: lambda_rest must have length k-1");
    const int n_pts = 17;
    std::vector<double> lam(k);
    std::copy(lambda_rest.begin(), lambda_rest.end(), lam.begin() + 1);
    std::vector<std::pair<double, double>> pts;
    pts.reserve(n_pts);
    for (int i = 0; i < n_pts; ++i) {
        double t = std::pow(10.0, 2.0 + 4.0 * i / (n_pts - 1));
        lam[0] = t;
        pts.emplace_back(t, theta_infinity_integrand(lam, p));
    }
    return decay_fit(pts);
}

enum class ThetaVerdict { converging, diverging, inconclusive };

inline const char* to_string(ThetaVerdict v) {
    switch (v) {
        case ThetaVerdict::converging: return "converging";
        case ThetaVerdict::diverging: return "diverging";
        default: return "inconclusive";
    }
}

struct ThresholdRow {
    double p = 0.0;
    std::vector<double> integral_values; // I(R) per cutoff
    ThetaVerdict verdict = ThetaVerdict::inconclusive;
};

struct ThresholdReport {
    int k = 0;
    std::vector<double> cutoffs;
    std::vector<ThresholdRow> rows;
};

namespace detail {

// Stabilization rule on I(R_1) <= I(R_2) <= ...: converging when successive
// increments shrink geometrically (ratio <= 0.7), diverging when the total
// at least doubles with non-decreasing increments.
inline ThetaVerdict theta_verdict(const std::vector<double>& I) {
    const std::size_t m = I.size();
    if (m < 3) return ThetaVerdict::inconclusive;
    std::vector<double> d(m - 1);
    for (std::size_t j = 0; j + 1 < m; ++j) d[j] = I[j + 1] - I[j];
    bool shrinking = true, growing = true;
    for (std::size_t j = 0; j + 1 < d.size(); ++j) {
        if (!(d[j + 1] <= 0.7 * std::abs(d[j]) + 1e-12 * I.back())) shrinking = false;
        if (!(d[j + 1] >= 0.999 * d[j])) growing = false;
    }
    bool doubled = I.front() > 0.0 && I.back() / I.front() >= 2.0;
    if (shrinking && !(growing && doubled)) return ThetaVerdict::converging;
    if (growing && doubled) return ThetaVerdict::diverging;
    return ThetaVerdict::inconclusive;
}

inline std::vector<double> dyadic_breakpoints(double lo, double hi) {
    std::vector<double> b{lo, hi};
    if (lo < 0.0 && hi > 0.0) b.push_back(0.0);
    double lim = std::max(std::abs(lo), std::abs(hi));
    for (double t = 1.0; t < lim; t *= 2.0) {
        if (t > lo && t < hi) b.push_back(t);
        if (-t > lo && -t < hi) b.push_back(-t);
    }
    std::sort(b.begin(), b.end());
    return b;
}

// Nested panel quadrature over the ordered region lower <= lam_d <= ... <= R;
// the Vandermonde is smooth there. Caller multiplies by k!.
inline double theta_ordered_nested(int k, double p, double R, int d, double lower,
                                   std::vector<double>& lam) {
    if (d == k) return theta_infinity_integrand(lam, p);
    const Rule1D& gl = gauss_legendre(16);
    std::vector<double> bp = dyadic_breakpoints(lower, R);
    double acc = 0.0;
    for (std::size_t s = 0; s + 1 < bp.size(); ++s) {
        double mid = 0.5 * (bp[s] + bp[s + 1]);
        double half = 0.5 * (bp[s + 1] - bp[s]);
        for (std::size_t i = 0; i < gl.x.size(); ++i) {
            lam[d] = mid + half * gl.x[i];
            acc += half * gl.w[i] * theta_ordered_nested(k, p, R, d + 1, lam[d], lam);
        }
    }
    return acc;
}

// Stratified MC over [-R,R]^k: dyadic max-norm shells, uniform proposals in
// the outer cube with rejection of the inner one. Streams keyed
// (seed, shell, sample).
inline double theta_cube_mc(int k, double p, double R, std::uint64_t seed,
                            std::int64_t mc_samples) {
    std::vector<double> radii{std::min(1.0, R)};
    while (radii.back() < R) radii.push_back(std::min(2.0 * radii.back(), R));
    const std::size_t n_shell = radii.size();
    const std::int64_t per_shell =
        std::max<std::int64_t>(1000, mc_samples / static_cast<std::int64_t>(n_shell));
    std::vector<double> lam(k);
    double total = 0.0;
    for (std::size_t sh = 0; sh < n_shell; ++sh) {
        double outer = radii[sh];
        double inner = sh == 0 ? 0.0 : radii[sh - 1];
        double sum = 0.0;
        for (std::int64_t i = 0; i < per_shell; ++i) {
            CounterRng rng(seed, sh, static_cast<std::uint64_t>(i));
            double maxabs = 0.0;
            for (int j = 0; j < k; ++j) {
                lam[j] = rng.uniform(-outer, outer);
                maxabs = std::max(maxabs, std::abs(lam[j]));
            }
            if (sh > 0 && maxabs <= inner) continue; // inner cube belongs to earlier shells
            sum += theta_infinity_integrand(lam, p);
        }
        // E[f * 1_shell] * vol(outer cube)
        total += std::pow(2.0 * outer, k) * sum / per_shell;
    }
    return total;
}

} // namespace detail

// I(R) = integral of the eigenvalue-side integrand over [-R,R]^k.
inline double theta_eigen_cutoff_integral(int k, double p, double R,
                                          std::uint64_t seed = 0x5eed,
                                          std::int64_t mc_samples = 400'000) {
    if (k < 1 || k > 5)
        throw std::invalid_argument("theta_eigen_cutoff_integral: k must be in [1,5]");
    if (!(p > 2.0)) throw std::invalid_argument("theta_eigen_cutoff_integral: p must be > 2");
    if (!(R > 0.0)) throw std::invalid_argument("theta_eigen_cutoff_integral: R must be > 0");
    if (k <= 3) {
        std::vector<double> lam(k);
        double fact = 1.0;
        for (int i = 2; i <= k; ++i) fact *= i;
        return fact * detail::theta_ordered_nested(k, p, R, 0, -R, lam);
    }
    return detail::theta_cube_mc(k, p, R, seed, mc_samples);
}

inline ThresholdRow theta_infinity_eigen(int k, double p, const std::vector<double>& cutoffs,
                                         std::uint64_t seed = 0x5eed,
                                         std::int64_t mc_samples = 400'000) {
    if (cutoffs.size() < 4)
        throw std::invalid_argument("theta_infinity_eigen: need at least 4 cutoffs");
    for (std::size_t i = 0; i < cutoffs.size(); ++i) {
        if (!(cutoffs[i] > 0.0))
            throw std::invalid_argument("theta_infinity_eigen: cutoffs must be positive");
        if (i > 0 && !(cutoffs[i] > cutoffs[i - 1]))
            throw std::invalid_argument("theta_infinity_eigen: cutoffs must be ascending");
    }
    double ratio = cutoffs[1] / cutoffs[0];
    for (std::size_t i = 1; i + 1 < cutoffs.size(); ++i)
        if (std::abs(cutoffs[i + 1] / cutoffs[i] - ratio) > 1e-6 * ratio)
            throw std::invalid_argument("theta_infinity_eigen: cutoffs must be geometric");

    ThresholdRow row;
    row.p = p;
    for (double R : cutoffs)
        row.integral_values.push_back(theta_eigen_cutoff_integral(k, p, R, seed, mc_samples));
    row.verdict = detail::theta_verdict(row.integral_values);
    return row;
}

inline ThresholdReport theta_threshold_report(int k, const std::vector<double>& p_grid,
                                              const std::vector<double>& cutoffs,
                                              std::uint64_t seed = 0x5eed,
                                              std::int64_t mc_samples = 400'000) {
    ThresholdReport rep;
    rep.k = k;
    rep.cutoffs = cutoffs;
    for (double p : p_grid)
        rep.rows.push_back(theta_infinity_eigen(k, p, cutoffs, seed, mc_samples));
    return rep;
}

struct PushforwardRatio {
    double matrix_side = 0.0;
    double eigen_side = 0.0;
    double ratio = 0.0;
};

using SymmetricEigenFn = std::function<double(std::span<const double>)>;

// Distributional check of the volume-form pushforward: E[f(eig(A))] for A
// with N(0,1) diagonal / N(0,1/2) off-diagonal entries against
// (2*pi)^{k/2} E[f(lambda) * prod|lambda_m - lambda_l|] for lambda ~ N(0,I).
// The per-function ratio must be one constant (the rotation-group volume
// times normalization) for every symmetric f.
inline std::vector<PushforwardRatio>
weyl_pushforward_check(int k, const std::vector<SymmetricEigenFn>& test_functions,
                       std::int64_t mc_samples, std::uint64_t seed, int threads = 1) {
    if (k < 1) throw std::invalid_argument("weyl_pushforward_check: k must be >= 1");
    if (test_functions.size() < 3)
        throw std::invalid_argument("weyl_pushforward_check: need at least 3 test functions");
    if (mc_samples < 1)
        throw std::invalid_argument("weyl_pushforward_check: need samples");

    const std::size_t nf = test_functions.size();
    const std::int64_t chunk = 8192;
    const std::int64_t n_chunks = (mc_samples + chunk - 1) / chunk;
    const double inv_sqrt2 = 0.70710678118654752440;

    // [chunk][function][side]
    std::vector<double> partial(static_cast<std::size_t>(n_chunks) * nf * 2, 0.0);

    parallel_for(n_chunks, threads, [&](std::int64_t c) {
        std::vector<double> lam(k);
        std::vector<double> acc(nf * 2, 0.0);
        const std::int64_t begin = c * chunk;
        const std::int64_t end = std::min(mc_samples, begin + chunk);
        for (std::int64_t i = begin; i < end; ++i) {
            {
                CounterRng rng(seed, 0, static_cast<std::uint64_t>(i));
                SymmetricMatrix A(k);
                for (int l = 0; l < k; ++l)
                    for (int m = l; m < k; ++m)
                        A.set(l, m, l == m ? rng.normal() : inv_sqrt2 * rng.normal());
                Spectrum s = eig_sym(A);
                for (std::size_t fi = 0; fi < nf; ++fi)
                    acc[2 * fi] += test_functions[fi](s.eigenvalues);
            }
            {
                CounterRng rng(seed, 1, static_cast<std::uint64_t>(i));
                for (int j = 0; j < k; ++j) lam[j] = rng.normal();
                double w = vandermonde_abs(lam);
                for (std::size_t fi = 0; fi < nf; ++fi)
                    acc[2 * fi + 1] += w * test_functions[fi](lam);
            }
        }
        std::copy(acc.begin(), acc.end(),
                  partial.begin() + static_cast<std::size_t>(c) * nf * 2);
    });

    std::vector<PushforwardRatio> out(nf);
    const double gauss_norm = std::pow(two_pi, 0.5 * k);
    for (std::size_t fi = 0; fi < nf; ++fi) {
        double ms = 0.0, es = 0.0;
        for (std::int64_t c = 0; c < n_chunks; ++c) {
            ms += partial[static_cast<std::size_t>(c) * nf * 2 + 2 * fi];
            es += partial[static_cast<std::size_t>(c) * nf * 2 + 2 * fi + 1];
        }
        out[fi].matrix_side = ms / mc_samples;
        out[fi].eigen_side = gauss_norm * es / mc_samples;
        out[fi].ratio = out[fi].eigen_side != 0.0 ? out[fi].matrix_side / out[fi].eigen_side
                                                  : 0.0;
    }
    return out;
}

struct DetDecayResult {
    double lhs = 0.0;          // |T(A)| at t = 1
    PowerLawFit fit;           // |T(tA)| against det(I + t^2 A^2)
    double bound_exponent = 0.0;
    bool quadrature_ok = true;
    bool passed = false;
};

// |T(tA)| <= c / det(I + t^2 A^2)^{1/4 - 1/(2 q')}: fit the left side against
// the determinant along the ray and compare exponents. Decay may overshoot
// the bound, so only the upper inequality is asserted.
inline DetDecayResult det_decay_bound_check(const SymmetricMatrix& A, double q_conj,
                                            const QuadratureBudget& budget) {
    if (!(q_conj > 1.0))
        throw std::invalid_argument("det_decay_bound_check: q_conj must be > 1");
    if (!(A.max_abs() > 0.0))
        throw std::invalid_argument("det_decay_bound_check: A must be nonzero");
    const int k = A.order();
    DetDecayResult res;
    {
        IntegralResult r = t_box(PhaseParameters::homogeneous(A), Region::cube(k), budget);
        res.lhs = std::abs(r.value);
        res.quadrature_ok = r.converged;
    }
    const int n_pts = 9;
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < n_pts; ++i) {
        double t = std::pow(10.0, 1.0 + 2.0 * i / (n_pts - 1));
        SymmetricMatrix At = A.scaled(t);
        IntegralResult r = t_box(PhaseParameters::homogeneous(At), Region::cube(k), budget);
        res.quadrature_ok = res.quadrature_ok && r.converged;
        pts.emplace_back(det_one_plus_A_sq(At), std::abs(r.value));
    }
    res.fit = decay_fit(pts);
    res.bound_exponent = -(0.25 - 0.5 / q_conj);
    res.passed = res.quadrature_ok && res.fit.exponent <= res.bound_exponent + 0.05;
    return res;
}

} // namespace oscint
