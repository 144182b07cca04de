#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "oscint/oscquad.hpp"
#include "oscint/parallel.hpp"
#include "oscint/powerlaw.hpp"
#include "oscint/rng.hpp"
#include "oscint/symlin.hpp"

namespace oscint {

// Parameter slab on which |T| is bounded below by delta * a11^{-1/2}:
// affine mode carries the b-interval constraint, homogeneous mode pins the
// first-row entries negative. kappa parametrizes the b-constraint
// |b_l - kappa*b_1*a_{1l}/a_{11}| <= c2 (kappa = 1 matches the completed
// square; kappa = 2 reproduces the literal printed region).
struct OmegaSpec {
    enum class Mode { affine, homogeneous };

    int k = 2;
    double a11 = 100.0;
    double c1 = 0.05;
    double c2 = 0.05;
    Mode mode = Mode::affine;
    double kappa = 1.0;

    void validate() const {
        if (k < 1) throw std::invalid_argument("OmegaSpec: k must be >= 1");
        if (!(a11 > 0.0)) throw std::invalid_argument("OmegaSpec: a11 must be > 0");
        if (!(c1 > 0.0 && c1 <= 0.05)) throw std::invalid_argument("OmegaSpec: c1 must be in (0, 0.05]");
        if (!(c2 > 0.0 && c2 <= 0.05)) throw std::invalid_argument("OmegaSpec: c2 must be in (0, 0.05]");
        if (!std::isfinite(kappa)) throw std::invalid_argument("OmegaSpec: kappa must be finite");
    }
};

namespace detail {

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    CounterRng r(seed, stream);
    return r.next_u64();
}

inline double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

} // namespace detail

inline bool omega_membership(const OmegaSpec& spec, const PhaseParameters& params) {
    if (params.order() != spec.k)
        throw std::invalid_argument("omega_membership: dimension mismatch");
    const int k = spec.k;
    const double a11 = params.A(0, 0);
    if (!(a11 > 0.0)) return false;

    double l1 = 0.0;
    for (int l = 1; l < k; ++l) l1 += std::abs(params.A(0, l));
    if (k > 1 && !(l1 < spec.c1 * a11)) return false;

    if (spec.mode == OmegaSpec::Mode::homogeneous) {
        for (int l = 1; l < k; ++l)
            if (!(params.A(0, l) < 0.0)) return false;
    } else {
        double ratio = params.b[0] / a11;
        if (!(-0.5 < ratio && ratio < -0.25)) return false;
    }

    for (int l = 1; l < k; ++l) {
        for (int m = l; m < k; ++m) {
            double xi = params.A(l, m) - params.A(0, l) * params.A(0, m) / a11;
            if (std::abs(xi) > spec.c2) return false;
        }
        if (spec.mode == OmegaSpec::Mode::affine) {
            double xi = params.b[l] - spec.kappa * params.b[0] * params.A(0, l) / a11;
            if (std::abs(xi) > spec.c2) return false;
        }
    }
    return true;
}

// Lebesgue measure of Omega(a11) (affine) / Omega+(a11) (homogeneous):
// l1-ball volume x b1-interval x constraint boxes, unit Jacobian.
inline double omega_measure_exact(const OmegaSpec& spec) {
    spec.validate();
    const int k = spec.k;
    if (spec.mode == OmegaSpec::Mode::affine) {
        if (k == 1) return spec.a11 / 4.0;
        double ball = std::pow(2.0 * spec.c1 * spec.a11, k - 1) / detail::factorial(k - 1);
        double boxes = std::pow(2.0 * spec.c2, (k - 1) + k * (k - 1) / 2);
        return ball * (spec.a11 / 4.0) * boxes;
    }
    if (k == 1) return 1.0; // zero free coordinates; point mass by convention
    double orthant = std::pow(spec.c1 * spec.a11, k - 1) / detail::factorial(k - 1);
    double boxes = std::pow(2.0 * spec.c2, k * (k - 1) / 2);
    return orthant * boxes;
}

// Uniform samples in the xi-coordinates, mapped back by the unit-Jacobian
// inverse. Per-sample RNG streams are keyed (seed, index): deterministic
// regardless of evaluation order.
inline std::vector<PhaseParameters> omega_sample(const OmegaSpec& spec, int count,
                                                 std::uint64_t seed) {
    spec.validate();
    if (count < 0) throw std::invalid_argument("omega_sample: count must be >= 0");
    const int k = spec.k;
    std::vector<PhaseParameters> out;
    out.reserve(count);

    for (int idx = 0; idx < count; ++idx) {
        CounterRng rng(seed, static_cast<std::uint64_t>(idx));
        for (int attempt = 0; attempt < 100; ++attempt) {
            SymmetricMatrix A(k);
            std::vector<double> b(k, 0.0);
            A.set(0, 0, spec.a11);

            // first row: uniform in the l1-ball of radius c1*a11 via
            // exponential spacings; negative orthant in homogeneous mode
            std::vector<double> s(k - 1, 0.0);
            if (k > 1) {
                double tot = 0.0;
                std::vector<double> e(k);
                for (int j = 0; j < k; ++j) {
                    e[j] = rng.exponential();
                    tot += e[j];
                }
                for (int j = 0; j < k - 1; ++j) s[j] = spec.c1 * spec.a11 * e[j] / tot;
                for (int l = 1; l < k; ++l) {
                    double sign = -1.0;
                    if (spec.mode == OmegaSpec::Mode::affine)
                        sign = rng.next_double() < 0.5 ? -1.0 : 1.0;
                    A.set(0, l, sign * s[l - 1]);
                }
            }

            if (spec.mode == OmegaSpec::Mode::affine)
                b[0] = -spec.a11 * rng.uniform(0.25, 0.5);

            for (int l = 1; l < k; ++l) {
                if (spec.mode == OmegaSpec::Mode::affine) {
                    double xi = rng.uniform(-spec.c2, spec.c2);
                    b[l] = xi + spec.kappa * b[0] * A(0, l) / spec.a11;
                }
                for (int m = l; m < k; ++m) {
                    double xi = rng.uniform(-spec.c2, spec.c2);
                    A.set(l, m, xi + A(0, l) * A(0, m) / spec.a11);
                }
            }

            PhaseParameters params(std::move(A), std::move(b));
            if (omega_membership(spec, params)) {
                out.push_back(std::move(params));
                break;
            }
        }
        if (out.size() != static_cast<std::size_t>(idx + 1))
            throw std::runtime_error("omega_sample: rejection loop failed");
    }
    return out;
}

struct ReducedPhase {
    double x1_crit;
    double psi;
};

// Critical point of x1 -> P(x1, x_rest) and the phase value there.
inline ReducedPhase reduced_phase(const PhaseParameters& params,
                                  std::span<const double> x_rest) {
    const int k = params.order();
    if (x_rest.size() != static_cast<std::size_t>(k - 1))
        throw std::invalid_argument("reduced_phase: x_rest must have length k-1");
    const double a11 = params.A(0, 0);
    if (!(a11 > 0.0)) throw std::invalid_argument("reduced_phase: requires a11 > 0");

    double s = 0.0;
    for (int j = 1; j < k; ++j) s += params.A(0, j) * x_rest[j - 1];
    double lin = params.b[0] + 2.0 * s;
    ReducedPhase r;
    r.x1_crit = -lin / (2.0 * a11);
    double psi = -lin * lin / (4.0 * a11);
    for (int l = 1; l < k; ++l) {
        for (int m = 1; m < k; ++m) psi += params.A(l, m) * x_rest[l - 1] * x_rest[m - 1];
        psi += params.b[l] * x_rest[l - 1];
    }
    r.psi = psi;
    return r;
}

struct ReducedSystem {
    PhaseParameters params;  // dimension k-1
    double phase_offset;     // -b1^2/(4 a11)
};

// Completing the square in x1: psi(x') = offset + (A'x',x') + (b',x') with
// A'_{lm} = a_{lm} - a_{1l}a_{1m}/a11 and b'_l = b_l - b1 a_{1l}/a11.
inline ReducedSystem reduce_along_first_axis(const PhaseParameters& params) {
    const int k = params.order();
    if (k < 2) throw std::invalid_argument("reduce_along_first_axis: requires k >= 2");
    const double a11 = params.A(0, 0);
    if (!(a11 > 0.0)) throw std::invalid_argument("reduce_along_first_axis: requires a11 > 0");
    SymmetricMatrix A(k - 1);
    std::vector<double> b(k - 1);
    for (int l = 1; l < k; ++l) {
        b[l - 1] = params.b[l] - params.b[0] * params.A(0, l) / a11;
        for (int m = l; m < k; ++m)
            A.set(l - 1, m - 1, params.A(l, m) - params.A(0, l) * params.A(0, m) / a11);
    }
    return ReducedSystem{PhaseParameters(std::move(A), std::move(b)),
                         -params.b[0] * params.b[0] / (4.0 * a11)};
}

// Leading stationary-phase coefficient c(A,b) with the a11^{-1/2} scaling
// removed: T(A,b) ~ c(A,b)/sqrt(a11) + O(1/a11).
inline std::complex<double> stationary_leading_coeff(const PhaseParameters& params,
                                                     double tol) {
    const double a11 = params.A(0, 0);
    if (!(a11 >= 100.0))
        throw std::invalid_argument("stationary_leading_coeff: requires a11 >= 100");
    const double sqrt_pi = 1.7724538509055160273;
    const std::complex<double> prefac = std::polar(sqrt_pi, 0.78539816339744830962); // e^{i pi/4} sqrt(pi)
    if (params.order() == 1)
        return prefac * std::polar(1.0, -params.b[0] * params.b[0] / (4.0 * a11));
    ReducedSystem red = reduce_along_first_axis(params);
    QuadratureBudget budget;
    budget.tol = tol;
    IntegralResult inner = t_box(red.params, Region::cube(params.order() - 1), budget);
    return prefac * std::polar(1.0, red.phase_offset) * inner.value;
}

struct TailSliceRow {
    double a11 = 0.0;
    std::vector<double> estimate;   // per p: mean(|T|^p) * mu(Omega(a11))
    std::vector<double> std_error;  // per p
    int n_excluded = 0;
    int n_valid = 0;
};

struct TailScanResult {
    std::vector<double> p_list;
    std::vector<TailSliceRow> slices;
    std::vector<PowerLawFit> fits; // per p
    std::int64_t n_excluded = 0;
    std::int64_t n_total = 0;
    bool exclusion_ok = true; // <= 1% excluded
};

// Slice estimator for theta over the Omega slabs: a11 on a log grid over
// [L, 1e3*L]; per slice, Monte Carlo over Omega(a11) with t_box as the
// evaluator. One T evaluation serves every p in p_list.
inline TailScanResult theta_tail_scan(OmegaSpec tmpl, const std::vector<double>& p_list,
                                      double L, int n_slices, int samples_per_slice,
                                      std::uint64_t seed, QuadratureBudget budget = {},
                                      int threads = 1) {
    if (!(L >= 100.0)) throw std::invalid_argument("theta_tail_scan: L must be >= 100");
    if (n_slices < 4) throw std::invalid_argument("theta_tail_scan: n_slices must be >= 4");
    if (samples_per_slice < 1) throw std::invalid_argument("theta_tail_scan: need samples");
    if (p_list.empty()) throw std::invalid_argument("theta_tail_scan: empty p list");
    for (double p : p_list)
        if (!(p > 0.0)) throw std::invalid_argument("theta_tail_scan: p must be > 0");

    TailScanResult res;
    res.p_list = p_list;
    std::vector<double> grid(n_slices);
    for (int i = 0; i < n_slices; ++i)
        grid[i] = L * std::pow(1000.0, static_cast<double>(i) / (n_slices - 1));

    struct Sample {
        double abs_t = 0.0;
        bool ok = false;
    };
    std::vector<Sample> table(static_cast<std::size_t>(n_slices) * samples_per_slice);

    std::vector<std::vector<PhaseParameters>> slice_samples;
    slice_samples.reserve(n_slices);
    for (int i = 0; i < n_slices; ++i) {
        OmegaSpec spec = tmpl;
        spec.a11 = grid[i];
        slice_samples.push_back(omega_sample(spec, samples_per_slice,
                                             detail::derive_seed(seed, i)));
    }

    parallel_for(static_cast<std::int64_t>(table.size()), threads, [&](std::int64_t t) {
        int i = static_cast<int>(t / samples_per_slice);
        int j = static_cast<int>(t % samples_per_slice);
        QuadratureBudget b = budget;
        // |T| ~ a11^{-1/2}; keep the absolute tolerance proportional
        b.tol = std::max(budget.tol, 2e-3 / std::sqrt(grid[i]));
        IntegralResult r = t_box(slice_samples[i][j], Region::cube(tmpl.k), b);
        table[t].abs_t = std::abs(r.value);
        table[t].ok = r.converged;
    });

    res.fits.resize(p_list.size());
    std::vector<std::vector<std::pair<double, double>>> fit_pts(p_list.size());
    for (int i = 0; i < n_slices; ++i) {
        OmegaSpec spec = tmpl;
        spec.a11 = grid[i];
        const double mu = omega_measure_exact(spec);
        TailSliceRow row;
        row.a11 = grid[i];
        for (std::size_t pi = 0; pi < p_list.size(); ++pi) {
            double sum = 0.0, sum2 = 0.0;
            int nv = 0, nx = 0;
            for (int j = 0; j < samples_per_slice; ++j) {
                const Sample& s = table[static_cast<std::size_t>(i) * samples_per_slice + j];
                if (!s.ok) { ++nx; continue; }
                double v = std::pow(s.abs_t, p_list[pi]);
                sum += v;
                sum2 += v * v;
                ++nv;
            }
            if (pi == 0) {
                row.n_excluded = nx;
                row.n_valid = nv;
                res.n_excluded += nx;
                res.n_total += samples_per_slice;
            }
            if (nv > 0) {
                double mean = sum / nv;
                double var = nv > 1 ? (sum2 - nv * mean * mean) / (nv - 1.0) : 0.0;
                row.estimate.push_back(mean * mu);
                row.std_error.push_back(std::sqrt(std::max(var, 0.0) / nv) * mu);
                if (mean > 0.0) fit_pts[pi].emplace_back(grid[i], mean * mu);
            } else {
                row.estimate.push_back(0.0);
                row.std_error.push_back(0.0);
            }
        }
        res.slices.push_back(std::move(row));
    }
    for (std::size_t pi = 0; pi < p_list.size(); ++pi)
        if (fit_pts[pi].size() >= 3) res.fits[pi] = decay_fit(fit_pts[pi]);
    res.exclusion_ok = res.n_excluded * 100 <= res.n_total;
    return res;
}

inline std::pair<PowerLawFit, TailScanResult>
theta_tail_estimate(const OmegaSpec& tmpl, double p, double L, int n_slices,
                    int samples_per_slice, std::uint64_t seed,
                    QuadratureBudget budget = {}, int threads = 1) {
    TailScanResult r = theta_tail_scan(tmpl, {p}, L, n_slices, samples_per_slice,
                                       seed, budget, threads);
    return {r.fits.at(0), std::move(r)};
}

} // namespace oscint
