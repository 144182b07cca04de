#include "doctest.h"
#include "oscint/spectralmeasure.hpp"

#include <cmath>

using namespace oscint;

TEST_CASE("summability thresholds") {
    CHECK(p0_affine(1) == 4.0);
    CHECK(p0_affine(3) == 8.0);
    CHECK(p0_homogeneous(1) == 2.0);
    CHECK(p0_homogeneous(4) == 8.0);
    CHECK_THROWS_AS(p0_affine(0), std::invalid_argument);
}

TEST_CASE("tail exponent analytic vs numeric") {
    CHECK(tail_exponent_analytic(2, 6.0) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(tail_exponent_analytic(3, 8.0) == doctest::Approx(-1.0).epsilon(1e-14));
    for (auto [k, p] : std::vector<std::pair<int, double>>{{1, 4.5}, {2, 6.0}, {3, 9.0}}) {
        // distinct fixed eigenvalues so the Vandermonde factor is nonzero
        std::vector<double> rest;
        for (int j = 1; j < k; ++j) rest.push_back(0.3 * j);
        PowerLawFit f = tail_exponent_numeric(k, p, rest);
        CHECK(std::abs(f.exponent - tail_exponent_analytic(k, p)) < 0.05);
    }
    CHECK_THROWS_AS(tail_exponent_numeric(2, 6.0, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("theta_verdict stabilization rule") {
    // geometric increments: converging
    CHECK(detail::theta_verdict({1.0, 1.5, 1.75, 1.875}) == ThetaVerdict::converging);
    // linear growth with doubling: diverging
    CHECK(detail::theta_verdict({1.0, 2.0, 3.0, 4.0}) == ThetaVerdict::diverging);
    // growing but not doubled: inconclusive
    CHECK(detail::theta_verdict({10.0, 10.5, 11.0, 11.5}) == ThetaVerdict::inconclusive);
    // too short
    CHECK(detail::theta_verdict({1.0, 2.0}) == ThetaVerdict::inconclusive);
}

TEST_CASE("theta_eigen_cutoff_integral k=1 against direct quadrature") {
    const double p = 5.0, R = 4.0;
    double got = theta_eigen_cutoff_integral(1, p, R);
    const Rule1D& gl = gauss_legendre(64);
    double ref = 0.0;
    for (std::size_t i = 0; i < gl.x.size(); ++i) {
        double lam = R * gl.x[i];
        ref += R * gl.w[i] * std::pow(1.0 + lam * lam, -0.25 * (p - 2.0));
    }
    CHECK(got == doctest::Approx(ref).epsilon(1e-8));
}

TEST_CASE("stratified MC agrees with nested quadrature at k=3") {
    double nested = theta_eigen_cutoff_integral(3, 10.0, 2.0);
    double mc = detail::theta_cube_mc(3, 10.0, 2.0, 0x5eed, 400'000);
    CHECK(mc == doctest::Approx(nested).epsilon(0.05));
}

TEST_CASE("theta_infinity_eigen input validation") {
    CHECK_THROWS_AS(theta_infinity_eigen(2, 6.0, {1.0, 10.0, 100.0}), std::invalid_argument);
    CHECK_THROWS_AS(theta_infinity_eigen(2, 6.0, {1.0, 10.0, 50.0, 100.0}),
                    std::invalid_argument); // not geometric
    CHECK_THROWS_AS(theta_infinity_eigen(2, 6.0, {-1.0, 10.0, 100.0, 1000.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(theta_eigen_cutoff_integral(6, 14.0, 2.0), std::invalid_argument);
}

TEST_CASE("theta_infinity_eigen verdicts bracket the k=1 threshold") {
    std::vector<double> cutoffs{5.0, 50.0, 500.0, 5000.0};
    ThresholdRow conv = theta_infinity_eigen(1, 4.5, cutoffs);
    ThresholdRow divg = theta_infinity_eigen(1, 3.5, cutoffs);
    CHECK(conv.verdict == ThetaVerdict::converging);
    CHECK(divg.verdict == ThetaVerdict::diverging);
}

TEST_CASE("theta_threshold_report carries one row per p") {
    std::vector<double> cutoffs{5.0, 50.0, 500.0, 5000.0};
    ThresholdReport rep = theta_threshold_report(1, {3.5, 4.5}, cutoffs);
    REQUIRE(rep.rows.size() == 2);
    CHECK(rep.rows[0].p == 3.5);
    CHECK(rep.rows[1].p == 4.5);
    CHECK(rep.rows[0].integral_values.size() == cutoffs.size());
}

TEST_CASE("weyl_pushforward_check ratios are constant across test functions") {
    std::vector<SymmetricEigenFn> fns{
        [](std::span<const double>) { return 1.0; },
        [](std::span<const double> lam) {
            double s = 0.0;
            for (double l : lam) s += l * l;
            return s;
        },
        [](std::span<const double> lam) {
            double p = 1.0;
            for (double l : lam) p /= 1.0 + l * l;
            return p;
        },
    };
    auto ratios = weyl_pushforward_check(2, fns, 200'000, 77, 2);
    REQUIRE(ratios.size() == 3);
    double lo = ratios[0].ratio, hi = ratios[0].ratio;
    for (const auto& r : ratios) {
        CHECK(r.ratio > 0.0);
        lo = std::min(lo, r.ratio);
        hi = std::max(hi, r.ratio);
    }
    CHECK((hi - lo) / hi < 0.03);
    CHECK_THROWS_AS(weyl_pushforward_check(2, {fns[0], fns[1]}, 1000, 77),
                    std::invalid_argument);
}

TEST_CASE("det_decay_bound_check on the identity ray") {
    DetDecayResult r = det_decay_bound_check(SymmetricMatrix::identity(2), 2.0, {});
    CHECK(r.quadrature_ok);
    // |T(tI)| ~ t^{-1} = det(I + t^2 I)^{-1/4}
    CHECK(r.fit.exponent == doctest::Approx(-0.25).epsilon(0.1));
    CHECK(r.bound_exponent == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(r.passed);
    CHECK_THROWS_AS(det_decay_bound_check(SymmetricMatrix(2), 2.0, {}), std::invalid_argument);
    CHECK_THROWS_AS(det_decay_bound_check(SymmetricMatrix::identity(2), 1.0, {}),
                    std::invalid_argument);
}
