#include "doctest.h"
#include "oscint/symlin.hpp"

#include <cmath>
#include <vector>

#include "oscint/rng.hpp"

using namespace oscint;

TEST_CASE("packed symmetric storage round-trips") {
    SymmetricMatrix a(3);
    a.set(0, 0, 1.0);
    a.set(0, 2, -2.5);
    a.set(2, 1, 4.0); // transposed write hits the same slot
    CHECK(a(0, 0) == 1.0);
    CHECK(a(2, 0) == -2.5);
    CHECK(a(1, 2) == 4.0);
    CHECK(a(2, 1) == 4.0);
    CHECK(a.packed().size() == 6);
    CHECK(a.max_abs() == 4.0);
}

TEST_CASE("constructor validation") {
    CHECK_THROWS_AS(SymmetricMatrix(0), std::invalid_argument);
    CHECK_THROWS_AS(SymmetricMatrix(2, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(SymmetricMatrix(1, {std::nan("")}), std::invalid_argument);
    CHECK_THROWS_AS(PhaseParameters(SymmetricMatrix(2), {1.0}), std::invalid_argument);
}

TEST_CASE("quadratic phase evaluation") {
    SymmetricMatrix a(2, {1.0, 0.5, -2.0});
    PhaseParameters p(a, {3.0, -1.0});
    std::vector<double> x{2.0, 1.0};
    // (Ax,x) = 4 + 2*0.5*2 - 2 = 4; (b,x) = 6 - 1 = 5
    CHECK(quadratic_phase_eval(p, x) == doctest::Approx(9.0).epsilon(1e-15));
}

TEST_CASE("eig_sym on a known 2x2") {
    SymmetricMatrix a(2, {2.0, 1.0, 2.0});
    Spectrum s = eig_sym(a);
    CHECK(s.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.eigenvalues[1] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("eig_sym reconstructs random matrices with rotation in SO_k") {
    CounterRng rng(17);
    for (int k : {1, 2, 3, 5}) {
        SymmetricMatrix a(k);
        for (int l = 0; l < k; ++l)
            for (int m = l; m < k; ++m) a.set(l, m, rng.uniform(-2.0, 2.0));
        Spectrum s = eig_sym(a);
        for (int j = 1; j < k; ++j) CHECK(s.eigenvalues[j] >= s.eigenvalues[j - 1]);
        // orthonormal columns
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j) {
                double dot = 0.0;
                for (int r = 0; r < k; ++r) dot += s.rot(r, i) * s.rot(r, j);
                CHECK(dot == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-10));
            }
        }
        // A = R diag R^T
        for (int l = 0; l < k; ++l) {
            for (int m = 0; m < k; ++m) {
                double v = 0.0;
                for (int j = 0; j < k; ++j)
                    v += s.rot(l, j) * s.eigenvalues[j] * s.rot(m, j);
                CHECK(v == doctest::Approx(a(l, m)).epsilon(1e-10));
            }
        }
        // det(R) = +1: expand by permutations for small k via LU-free check
        if (k == 2) {
            double det = s.rot(0, 0) * s.rot(1, 1) - s.rot(0, 1) * s.rot(1, 0);
            CHECK(det == doctest::Approx(1.0).epsilon(1e-10));
        }
        if (k == 3) {
            double det = s.rot(0, 0) * (s.rot(1, 1) * s.rot(2, 2) - s.rot(1, 2) * s.rot(2, 1))
                       - s.rot(0, 1) * (s.rot(1, 0) * s.rot(2, 2) - s.rot(1, 2) * s.rot(2, 0))
                       + s.rot(0, 2) * (s.rot(1, 0) * s.rot(2, 1) - s.rot(1, 1) * s.rot(2, 0));
            CHECK(det == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("det_one_plus_A_sq and vandermonde") {
    SymmetricMatrix a(2, {2.0, 1.0, 2.0}); // eigenvalues 1, 3
    CHECK(det_one_plus_A_sq(a) == doctest::Approx(20.0).epsilon(1e-12));
    std::vector<double> lam{1.0, 2.0, 4.0};
    CHECK(vandermonde_abs(lam) == doctest::Approx(6.0).epsilon(1e-15));
    std::vector<double> one{5.0};
    CHECK(vandermonde_abs(one) == 1.0);
}

TEST_CASE("resolvent real part equals the damped quadratic form") {
    CounterRng rng(23);
    for (int k : {1, 2, 4}) {
        SymmetricMatrix a(k);
        std::vector<double> b(k);
        for (int l = 0; l < k; ++l) {
            b[l] = rng.uniform(-2.0, 2.0);
            for (int m = l; m < k; ++m) a.set(l, m, rng.uniform(-2.0, 2.0));
        }
        std::complex<double> q = resolvent_quadratic(a, b);
        // reference: ((I + A^2)^{-1} b, b) via the spectrum
        Spectrum s = eig_sym(a);
        double re = 0.0;
        for (int j = 0; j < k; ++j) {
            double c = 0.0;
            for (int i = 0; i < k; ++i) c += s.rot(i, j) * b[i];
            re += c * c / (1.0 + s.eigenvalues[j] * s.eigenvalues[j]);
        }
        CHECK(q.real() == doctest::Approx(re).epsilon(1e-12));
    }
}
