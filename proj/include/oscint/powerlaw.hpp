#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace oscint {

// least-squares fit of y = amplitude * x^exponent on (log x, log y)
struct PowerLawFit {
    double exponent = 0.0;
    double amplitude = 0.0;
    double r_squared = 0.0;
    double window_min = 0.0;
    double window_max = 0.0;
};

inline PowerLawFit decay_fit(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3)
        throw std::invalid_argument("decay_fit: need at least 3 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double xmin = points.front().first, xmax = points.front().first;
    const double n = static_cast<double>(points.size());
    std::vector<double> lx(points.size()), ly(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        auto [x, y] = points[i];
        if (!(x > 0.0) || !(y > 0.0))
            throw std::invalid_argument("decay_fit: points must be strictly positive");
        lx[i] = std::log(x);
        ly[i] = std::log(y);
        sx += lx[i]; sy += ly[i];
        sxx += lx[i] * lx[i]; sxy += lx[i] * ly[i];
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("decay_fit: degenerate abscissa");
    PowerLawFit fit;
    fit.exponent = (n * sxy - sx * sy) / denom;
    double intercept = (sy - fit.exponent * sx) / n;
    fit.amplitude = std::exp(intercept);
    double ss_res = 0.0, ss_tot = 0.0, ymean = sy / n;
    for (std::size_t i = 0; i < points.size(); ++i) {
        double pred = intercept + fit.exponent * lx[i];
        ss_res += (ly[i] - pred) * (ly[i] - pred);
        ss_tot += (ly[i] - ymean) * (ly[i] - ymean);
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    fit.window_min = xmin;
    fit.window_max = xmax;
    return fit;
}

} // namespace oscint
