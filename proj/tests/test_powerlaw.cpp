#include "doctest.h"
#include "oscint/powerlaw.hpp"

#include <cmath>

using namespace oscint;

TEST_CASE("decay_fit recovers an exact power law") {
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < 8; ++i) {
        double x = std::pow(10.0, 1.0 + 0.5 * i);
        pts.emplace_back(x, 3.0 * std::pow(x, -1.5));
    }
    PowerLawFit f = decay_fit(pts);
    CHECK(f.exponent == doctest::Approx(-1.5).epsilon(1e-12));
    CHECK(f.amplitude == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.window_min == doctest::Approx(10.0));
    CHECK(f.window_max == doctest::Approx(std::pow(10.0, 4.5)));
}

TEST_CASE("decay_fit validation") {
    CHECK_THROWS_AS(decay_fit({{1.0, 1.0}, {2.0, 0.5}}), std::invalid_argument);
    CHECK_THROWS_AS(decay_fit({{1.0, 1.0}, {2.0, -0.5}, {3.0, 0.2}}), std::invalid_argument);
    CHECK_THROWS_AS(decay_fit({{1.0, 1.0}, {1.0, 0.5}, {1.0, 0.2}}), std::invalid_argument);
}

TEST_CASE("decay_fit r_squared drops for noisy data") {
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < 10; ++i) {
        double x = std::pow(4.0, i);
        double wobble = (i % 2 == 0) ? 3.0 : 1.0 / 3.0;
        pts.emplace_back(x, wobble * std::pow(x, -1.0));
    }
    PowerLawFit f = decay_fit(pts);
    CHECK(f.r_squared < 0.95);
    CHECK(f.exponent == doctest::Approx(-1.0).epsilon(0.1));
}
