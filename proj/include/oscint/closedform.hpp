#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "oscint/symlin.hpp"

namespace oscint {

inline constexpr double two_pi = 6.283185307179586476925286766559;

// (1 - i*lambda)^{-1/2} on the branch cut along the lower imaginary axis,
// normalized so 1^{-1/2} = 1. Modulus (1+lambda^2)^{-1/4}, argument
// atan(lambda)/2 in (-pi/4, pi/4).
inline std::complex<double> branch_inv_sqrt(double lambda) {
    double mod = std::pow(1.0 + lambda * lambda, -0.25);
    return std::polar(mod, 0.5 * std::atan(lambda));
}

// Gaussian-regularized integral of e^{iP}:
// (2*pi)^{k/2} * prod_j (1 - i*lambda_j)^{-1/2} * exp(-((I-iA)^{-1}b,b)/4)
inline std::complex<double> t_infinity(const PhaseParameters& params) {
    const int k = params.order();
    Spectrum s = eig_sym(params.A);
    std::complex<double> det_root = 1.0;
    for (double lam : s.eigenvalues) det_root *= branch_inv_sqrt(lam);
    std::complex<double> quad = resolvent_quadratic(params.A, params.b);
    return std::pow(two_pi, 0.5 * k) * det_root * std::exp(-quad / 4.0);
}

// |t_infinity|^p without complex exponentiation; log-space to avoid
// overflow for large p or large spectra.
inline double abs_t_infinity_pow(const PhaseParameters& params, double p) {
    if (!(p > 0.0)) throw std::invalid_argument("abs_t_infinity_pow: p must be > 0");
    const int k = params.order();
    Spectrum s = eig_sym(params.A);
    double log_sum = 0.5 * p * k * std::log(two_pi);
    for (double lam : s.eigenvalues) log_sum -= 0.25 * p * std::log1p(lam * lam);
    log_sum -= 0.25 * p * resolvent_quadratic(params.A, params.b).real();
    return std::exp(log_sum);
}

// Gaussian b-marginal: integral over R^k of exp(-p((I+A^2)^{-1}b,b)/4) db
// = (4*pi/p)^{k/2} * det(I+A^2)^{1/2}.
inline double b_marginal(const SymmetricMatrix& A, double p) {
    if (!(p > 0.0)) throw std::invalid_argument("b_marginal: p must be > 0 (divergent Gaussian)");
    const int k = A.order();
    return std::pow(4.0 * 3.14159265358979323846 / p, 0.5 * k) *
           std::sqrt(det_one_plus_A_sq(A));
}

// Eigenvalue-side integrand: prod|lambda_m - lambda_l| * prod(1+lambda^2)^{-(p-2)/4}
inline double theta_infinity_integrand(std::span<const double> lambda, double p) {
    double log_damp = 0.0;
    for (double lam : lambda) log_damp -= 0.25 * (p - 2.0) * std::log1p(lam * lam);
    return vandermonde_abs(lambda) * std::exp(log_damp);
}

} // namespace oscint
