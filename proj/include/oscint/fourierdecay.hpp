#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "oscint/bessel.hpp"
#include "oscint/gauss.hpp"
#include "oscint/powerlaw.hpp"

namespace oscint {

// Fourier convention: chi_hat(b) = integral over the shape of e^{-2*pi*i (b,x)} dx.

struct Shape2D {
    enum class Kind { box, polygon, disc };

    Kind kind = Kind::box;
    int k = 2; // box dimension (unit cube [0,1]^k)
    std::vector<std::array<double, 2>> vertices; // polygon, counterclockwise
    std::array<double, 2> center{0.0, 0.0};
    double radius = 0.0;

    static Shape2D unit_box(int dim) {
        if (dim < 1) throw std::invalid_argument("Shape2D: box dimension must be >= 1");
        Shape2D s;
        s.kind = Kind::box;
        s.k = dim;
        return s;
    }

    static Shape2D polygon(std::vector<std::array<double, 2>> verts) {
        if (verts.size() < 3)
            throw std::invalid_argument("Shape2D: polygon needs >= 3 vertices");
        Shape2D s;
        s.kind = Kind::polygon;
        s.k = 2;
        s.vertices = std::move(verts);
        if (!(s.signed_area() > 0.0))
            throw std::invalid_argument("Shape2D: polygon must be counterclockwise and nondegenerate");
        if (s.self_intersects())
            throw std::invalid_argument("Shape2D: polygon must be simple");
        return s;
    }

    static Shape2D disc(double r, std::array<double, 2> c = {0.0, 0.0}) {
        if (!(r > 0.0)) throw std::invalid_argument("Shape2D: disc radius must be > 0");
        Shape2D s;
        s.kind = Kind::disc;
        s.k = 2;
        s.radius = r;
        s.center = c;
        return s;
    }

    double signed_area() const {
        double a = 0.0;
        const std::size_t n = vertices.size();
        for (std::size_t i = 0; i < n; ++i) {
            const auto& p = vertices[i];
            const auto& q = vertices[(i + 1) % n];
            a += p[0] * q[1] - q[0] * p[1];
        }
        return 0.5 * a;
    }

    bool self_intersects() const {
        const std::size_t n = vertices.size();
        auto cross = [](double ax, double ay, double bx, double by) {
            return ax * by - ay * bx;
        };
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                // skip adjacent edges
                if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
                const auto& a = vertices[i];
                const auto& b = vertices[(i + 1) % n];
                const auto& c = vertices[j];
                const auto& d = vertices[(j + 1) % n];
                double d1 = cross(b[0] - a[0], b[1] - a[1], c[0] - a[0], c[1] - a[1]);
                double d2 = cross(b[0] - a[0], b[1] - a[1], d[0] - a[0], d[1] - a[1]);
                double d3 = cross(d[0] - c[0], d[1] - c[1], a[0] - c[0], a[1] - c[1]);
                double d4 = cross(d[0] - c[0], d[1] - c[1], b[0] - c[0], b[1] - c[1]);
                if (((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0))) return true;
            }
        }
        return false;
    }

    double measure() const {
        switch (kind) {
            case Kind::box: return 1.0;
            case Kind::polygon: return signed_area();
            case Kind::disc: return 3.14159265358979323846 * radius * radius;
        }
        return 0.0;
    }

    double max_extent() const {
        switch (kind) {
            case Kind::box: return std::sqrt(static_cast<double>(k));
            case Kind::disc: return std::hypot(center[0], center[1]) + radius;
            case Kind::polygon: {
                double m = 0.0;
                for (const auto& v : vertices) m = std::max(m, std::hypot(v[0], v[1]));
                return m;
            }
        }
        return 1.0;
    }
};

namespace detail {

// phi(t) = (1 - e^{-2 pi i t}) / (2 pi i t), phi(0) = 1; series near 0
inline std::complex<double> segment_factor(double t) {
    const double two_pi = 6.283185307179586476925286766559;
    std::complex<double> s{0.0, two_pi * t}; // 2 pi i t
    if (std::abs(t) < 1e-4) {
        // (1 - e^{-s})/s = sum_{m>=0} (-s)^m / (m+1)!
        std::complex<double> term{1.0, 0.0}, acc{1.0, 0.0};
        for (int m = 1; m <= 6; ++m) {
            term *= -s / static_cast<double>(m + 1);
            acc += term;
        }
        return acc;
    }
    return (1.0 - std::exp(-s)) / s;
}

} // namespace detail

// transform of the unit cube [0,1]^k indicator
inline std::complex<double> chi_hat_box(std::span<const double> b) {
    std::complex<double> p{1.0, 0.0};
    for (double t : b) p *= detail::segment_factor(t);
    return p;
}

// boundary-integral closed form for a simple CCW polygon
inline std::complex<double> chi_hat_polygon(const Shape2D& shape,
                                            std::array<double, 2> b) {
    if (shape.kind != Shape2D::Kind::polygon)
        throw std::invalid_argument("chi_hat_polygon: shape must be a polygon");
    const double two_pi = 6.283185307179586476925286766559;
    double b2 = b[0] * b[0] + b[1] * b[1];
    if (b2 < 1e-12) return {shape.signed_area(), 0.0};

    const std::size_t n = shape.vertices.size();
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        const auto& v1 = shape.vertices[i];
        const auto& v2 = shape.vertices[(i + 1) % n];
        double ex = v2[0] - v1[0], ey = v2[1] - v1[1];
        // (b . n_e) * length = b_x * ey - b_y * ex for CCW orientation
        double flux = b[0] * ey - b[1] * ex;
        if (flux == 0.0) continue;
        double bv1 = b[0] * v1[0] + b[1] * v1[1];
        double be = b[0] * ex + b[1] * ey;
        acc += flux * std::polar(1.0, -two_pi * bv1) * detail::segment_factor(be);
    }
    // divide by -2 pi i |b|^2
    return acc / (std::complex<double>(0.0, -two_pi) * b2);
}

// radial closed form R * J1(2 pi R |b|) / |b| (times a unimodular phase if
// the disc is off-center; the modulus is center-independent)
inline std::complex<double> chi_hat_disc(double radius, std::array<double, 2> b) {
    if (!(radius > 0.0)) throw std::invalid_argument("chi_hat_disc: radius must be > 0");
    const double two_pi = 6.283185307179586476925286766559;
    double r = std::hypot(b[0], b[1]);
    if (r < 1e-12) return {3.14159265358979323846 * radius * radius, 0.0};
    return {radius * bessel_j1(two_pi * radius * r) / r, 0.0};
}

inline std::complex<double> chi_hat(const Shape2D& shape, std::array<double, 2> b) {
    switch (shape.kind) {
        case Shape2D::Kind::box: {
            if (shape.k != 2) throw std::invalid_argument("chi_hat: box arity mismatch");
            return chi_hat_box(std::span<const double>(b.data(), 2));
        }
        case Shape2D::Kind::polygon: {
            auto v = chi_hat_polygon(shape, b);
            if (shape.center[0] != 0.0 || shape.center[1] != 0.0) {
                const double two_pi = 6.283185307179586476925286766559;
                v *= std::polar(1.0, -two_pi * (b[0] * shape.center[0] + b[1] * shape.center[1]));
            }
            return v;
        }
        case Shape2D::Kind::disc: {
            auto v = chi_hat_disc(shape.radius, b);
            const double two_pi = 6.283185307179586476925286766559;
            return v * std::polar(1.0, -two_pi * (b[0] * shape.center[0] + b[1] * shape.center[1]));
        }
    }
    return {0.0, 0.0};
}

struct LqEstimate {
    double value = 0.0;
    bool converged = false;
    double tail_slope = 0.0;
    std::vector<double> ladder;       // radii
    std::vector<double> increments;   // shell contributions
};

namespace detail {

// 1-D integral of |phi|^q over [0, r]
inline double box_line_lq(double q, double r0, double r1) {
    const Rule1D& rule = gauss_legendre(12);
    double acc = 0.0;
    int npanels = std::max(1, static_cast<int>(std::ceil((r1 - r0) / 0.5)));
    double h = (r1 - r0) / npanels;
    for (int pnl = 0; pnl < npanels; ++pnl) {
        double mid = r0 + (pnl + 0.5) * h, half = 0.5 * h;
        for (std::size_t i = 0; i < rule.x.size(); ++i) {
            double t = mid + half * rule.x[i];
            acc += half * rule.w[i] * std::pow(std::abs(segment_factor(t)), q);
        }
    }
    return acc;
}

inline double annulus_lq(const Shape2D& shape, double q, double r0, double r1,
                         int angular_nodes) {
    const double two_pi = 6.283185307179586476925286766559;
    const Rule1D& rule = gauss_legendre(12);
    double panel_w = 0.5 / (1.0 + shape.max_extent());
    int npanels = std::max(1, static_cast<int>(std::ceil((r1 - r0) / panel_w)));
    double h = (r1 - r0) / npanels;
    double acc = 0.0;
    for (int a = 0; a < angular_nodes; ++a) {
        double th = two_pi * (a + 0.5) / angular_nodes;
        double cth = std::cos(th), sth = std::sin(th);
        double radial = 0.0;
        for (int pnl = 0; pnl < npanels; ++pnl) {
            double mid = r0 + (pnl + 0.5) * h, half = 0.5 * h;
            for (std::size_t i = 0; i < rule.x.size(); ++i) {
                double rho = mid + half * rule.x[i];
                double m = std::abs(chi_hat(shape, {rho * cth, rho * sth}));
                radial += half * rule.w[i] * std::pow(m, q) * rho;
            }
        }
        acc += radial;
    }
    return acc * (two_pi / angular_nodes);
}

} // namespace detail

// L^q mass of chi_hat over |b| <= r_max with a geometric shell ladder; the
// fitted shell slope decides convergence the same way the eigenvalue-side
// cutoff rule does (strictly shrinking shells).
inline LqEstimate lq_norm_estimate(const Shape2D& shape, double q, double r_max) {
    if (!(q > 1.0)) throw std::invalid_argument("lq_norm_estimate: q must be > 1");
    if (!(r_max > 8.0)) throw std::invalid_argument("lq_norm_estimate: r_max must be > 8");

    // ladder 4, 8, ..., r_max
    std::vector<double> ladder{4.0};
    while (ladder.back() * 2.0 < r_max) ladder.push_back(ladder.back() * 2.0);
    ladder.push_back(r_max);

    LqEstimate est;
    est.ladder = ladder;

    if (shape.kind == Shape2D::Kind::box) {
        // separable: the tensor mass converges iff the 1-D line integral
        // does, so the ladder diagnostics track the line increments (the
        // k-th-power increments are polluted by the growing product factor)
        double line = detail::box_line_lq(q, 0.0, ladder[0]);
        for (std::size_t j = 1; j < ladder.size(); ++j) {
            double d = detail::box_line_lq(q, ladder[j - 1], ladder[j]);
            est.increments.push_back(d);
            line += d;
        }
        est.value = std::pow(2.0 * line, shape.k);
    } else {
        const int angular = 512;
        double inner = detail::annulus_lq(shape, q, 1e-6, ladder[0], angular);
        // angular-aliasing control: double the grid once on the inner disc
        double inner2 = detail::annulus_lq(shape, q, 1e-6, ladder[0], 2 * angular);
        double total = inner2;
        if (std::abs(inner2 - inner) > 5e-3 * std::abs(inner2))
            throw std::runtime_error("lq_norm_estimate: angular grid not converged");
        for (std::size_t j = 1; j < ladder.size(); ++j) {
            double d = detail::annulus_lq(shape, q, ladder[j - 1], ladder[j], angular);
            est.increments.push_back(d);
            total += d;
        }
        est.value = total;
    }

    std::vector<std::pair<double, double>> pts;
    std::size_t first = est.increments.size() > 5 ? est.increments.size() - 5 : 0;
    for (std::size_t j = first; j < est.increments.size(); ++j)
        if (est.increments[j] > 0.0) pts.emplace_back(ladder[j + 1], est.increments[j]);
    if (pts.size() >= 3) {
        est.tail_slope = decay_fit(pts).exponent;
        est.converged = est.tail_slope < -0.05;
    } else {
        est.tail_slope = 0.0;
        est.converged = false;
    }
    return est;
}

// Theorem-3 exponent map: T in L^p(R^3) for p > 6 - 2/q
inline double thm3_exponent(double q) {
    if (!(q >= 1.0)) throw std::invalid_argument("thm3_exponent: q must be >= 1");
    return 6.0 - 2.0 / q;
}

} // namespace oscint
