#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "oscint/fresnel.hpp"
#include "oscint/gauss.hpp"
#include "oscint/symlin.hpp"

namespace oscint {

struct QuadratureBudget {
    double tol = 1e-8;
    std::int64_t max_evals = 100'000'000;
    int base_order = 12;

    void validate() const {
        if (!(tol > 0.0)) throw std::invalid_argument("QuadratureBudget: tol must be > 0");
        if (base_order < 4) throw std::invalid_argument("QuadratureBudget: base_order must be >= 4");
        if (max_evals < 1) throw std::invalid_argument("QuadratureBudget: max_evals must be >= 1");
    }
};

struct IntegralResult {
    std::complex<double> value{0.0, 0.0};
    double err_abs = 0.0;
    std::int64_t n_evals = 0;
    std::string method;
    bool converged = false;
};

struct Region {
    enum class Kind { unit_cube, box, simplex_union };

    Kind kind = Kind::unit_cube;
    int k = 1;
    std::vector<double> lower, upper;
    // each simplex: k+1 vertices, each of dimension k
    std::vector<std::vector<std::vector<double>>> simplices;

    static Region cube(int dim) {
        Region r;
        r.kind = Kind::unit_cube;
        r.k = dim;
        r.lower.assign(dim, 0.0);
        r.upper.assign(dim, 1.0);
        return r;
    }

    static Region make_box(std::vector<double> lo, std::vector<double> hi) {
        if (lo.size() != hi.size() || lo.empty())
            throw std::invalid_argument("Region: box corners must have equal positive dimension");
        for (std::size_t j = 0; j < lo.size(); ++j)
            if (!(lo[j] < hi[j]))
                throw std::invalid_argument("Region: box requires lower < upper componentwise");
        Region r;
        r.kind = Kind::box;
        r.k = static_cast<int>(lo.size());
        r.lower = std::move(lo);
        r.upper = std::move(hi);
        return r;
    }

    static Region simplex_union(std::vector<std::vector<std::vector<double>>> simps) {
        if (simps.empty()) throw std::invalid_argument("Region: empty simplex union");
        Region r;
        r.kind = Kind::simplex_union;
        r.k = static_cast<int>(simps.front().size()) - 1;
        for (const auto& s : simps) {
            if (static_cast<int>(s.size()) != r.k + 1)
                throw std::invalid_argument("Region: simplex must have k+1 vertices");
            for (const auto& v : s)
                if (static_cast<int>(v.size()) != r.k)
                    throw std::invalid_argument("Region: simplex vertex dimension mismatch");
        }
        r.simplices = std::move(simps);
        return r;
    }

    double box_volume() const {
        double v = 1.0;
        for (int j = 0; j < k; ++j) v *= upper[j] - lower[j];
        return v;
    }
};

namespace detail {

constexpr int max_dim = 8;
constexpr int max_depth = 64;

inline std::int64_t int_pow(std::int64_t base, int e) {
    std::int64_t r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

// Adaptive panel-bisection tensor Gauss engine for oscillatory integrands.
// Panels are bisected along the axis of largest phase variation until the
// per-panel phase range is at most 2*pi*base_order/4, then integrated with
// tensor Gauss-Legendre of order base_order; the error estimate compares
// against order 2*base_order on each leaf. Deterministic DFS order.
template <class F>
class OscEngine {
public:
    OscEngine(int k, const F& f, const QuadratureBudget& budget)
        : k_(k), f_(f), budget_(budget),
          theta_(0.25 * 6.283185307179586 * budget.base_order),
          lo_rule_(&gauss_legendre(budget.base_order)),
          hi_rule_(&gauss_legendre(2 * budget.base_order)) {
        budget_.validate();
        if (k < 1 || k > max_dim)
            throw std::invalid_argument("oscquad: dimension must be in [1,8]");
        leaf_cost_ = int_pow(budget_.base_order, k) + int_pow(2 * budget_.base_order, k);
    }

    IntegralResult run(const double* lo, const double* hi) {
        vol_total_ = 1.0;
        for (int j = 0; j < k_; ++j) vol_total_ *= hi[j] - lo[j];
        value_ = {0.0, 0.0};
        err_ = 0.0;
        evals_ = 0;
        exhausted_ = false;
        panel(lo, hi, 0);
        IntegralResult r;
        r.value = value_;
        r.err_abs = err_;
        r.n_evals = evals_;
        r.method = "adaptive-tensor-gauss";
        r.converged = !exhausted_ && err_ <= budget_.tol;
        return r;
    }

private:
    void panel(const double* lo, const double* hi, int depth) {
        double var[max_dim];
        f_.axis_variation(lo, hi, k_, var);
        double total = 0.0;
        int split_axis = 0;
        for (int j = 0; j < k_; ++j) {
            total += var[j];
            if (var[j] > var[split_axis]) split_axis = j;
        }
        if (var[split_axis] == 0.0) {
            for (int j = 1; j < k_; ++j)
                if (hi[j] - lo[j] > hi[split_axis] - lo[split_axis]) split_axis = j;
        }

        const bool can_split = depth < max_depth && !exhausted_;
        if (total > theta_ && can_split) {
            if (evals_ + 2 * leaf_cost_ <= budget_.max_evals) {
                bisect(lo, hi, split_axis, depth);
                return;
            }
            exhausted_ = true;
        }

        if (evals_ + leaf_cost_ > budget_.max_evals) {
            // budget gone: settle for the low-order value, flagged unconverged
            exhausted_ = true;
            auto v = tensor(lo, hi, *lo_rule_);
            evals_ += int_pow(budget_.base_order, k_);
            value_ += v;
            err_ += std::abs(v);
            return;
        }

        auto v1 = tensor(lo, hi, *lo_rule_);
        auto v2 = tensor(lo, hi, *hi_rule_);
        evals_ += leaf_cost_;
        double e = std::abs(v1 - v2);
        double vol = 1.0;
        for (int j = 0; j < k_; ++j) vol *= hi[j] - lo[j];
        double local_tol = budget_.tol * (vol / vol_total_);
        if (e > local_tol && depth < max_depth &&
            evals_ + 2 * leaf_cost_ <= budget_.max_evals && !exhausted_) {
            bisect(lo, hi, split_axis, depth);
            return;
        }
        value_ += v2;
        err_ += e;
    }

    void bisect(const double* lo, const double* hi, int axis, int depth) {
        double mid = 0.5 * (lo[axis] + hi[axis]);
        double l2[max_dim], h2[max_dim];
        for (int j = 0; j < k_; ++j) { l2[j] = lo[j]; h2[j] = hi[j]; }
        h2[axis] = mid;
        panel(l2, h2, depth + 1);
        l2[axis] = mid;
        h2[axis] = hi[axis];
        panel(l2, h2, depth + 1);
    }

    std::complex<double> tensor(const double* lo, const double* hi, const Rule1D& rule) {
        double mid[max_dim], half[max_dim];
        double jac = 1.0;
        for (int j = 0; j < k_; ++j) {
            mid[j] = 0.5 * (lo[j] + hi[j]);
            half[j] = 0.5 * (hi[j] - lo[j]);
            jac *= half[j];
        }
        const double phase0 = f_.phase(mid);
        const int n = static_cast<int>(rule.x.size());
        std::complex<double> acc{0.0, 0.0};
        double xs[max_dim];

        if (k_ == 1) {
            for (int i = 0; i < n; ++i) {
                xs[0] = mid[0] + half[0] * rule.x[i];
                acc += rule.w[i] * point(xs, phase0);
            }
        } else if (k_ == 2) {
            for (int i = 0; i < n; ++i) {
                xs[0] = mid[0] + half[0] * rule.x[i];
                std::complex<double> row{0.0, 0.0};
                for (int j = 0; j < n; ++j) {
                    xs[1] = mid[1] + half[1] * rule.x[j];
                    row += rule.w[j] * point(xs, phase0);
                }
                acc += rule.w[i] * row;
            }
        } else {
            int idx[max_dim] = {0};
            for (int j = 0; j < k_; ++j) xs[j] = mid[j] + half[j] * rule.x[0];
            while (true) {
                double w = 1.0;
                for (int j = 0; j < k_; ++j) w *= rule.w[idx[j]];
                acc += w * point(xs, phase0);
                int j = k_ - 1;
                while (j >= 0) {
                    if (++idx[j] < n) {
                        xs[j] = mid[j] + half[j] * rule.x[idx[j]];
                        break;
                    }
                    idx[j] = 0;
                    xs[j] = mid[j] + half[j] * rule.x[0];
                    --j;
                }
                if (j < 0) break;
            }
        }
        return acc * jac * std::polar(1.0, phase0);
    }

    std::complex<double> point(const double* xs, double phase0) {
        double ph = f_.phase(xs) - phase0;
        std::complex<double> e{std::cos(ph), std::sin(ph)};
        if constexpr (F::has_amplitude) {
            return f_.amplitude(xs) * e;
        } else {
            return e;
        }
    }

    int k_;
    const F& f_;
    QuadratureBudget budget_;
    double theta_;
    const Rule1D* lo_rule_;
    const Rule1D* hi_rule_;
    std::int64_t leaf_cost_ = 0;

    double vol_total_ = 1.0;
    std::complex<double> value_{0.0, 0.0};
    double err_ = 0.0;
    std::int64_t evals_ = 0;
    bool exhausted_ = false;
};

struct QuadraticPhase {
    static constexpr bool has_amplitude = false;
    const PhaseParameters* p;

    double phase(const double* x) const {
        const int k = p->order();
        double s = 0.0;
        for (int l = 0; l < k; ++l) {
            double row = p->b[l];
            for (int m = 0; m < k; ++m) row += p->A(l, m) * x[m];
            s += x[l] * row;
        }
        return s;
    }

    std::complex<double> amplitude(const double*) const { return {1.0, 0.0}; }

    // d_j P = 2 sum_m a_jm x_m + b_j is linear, so its sup over the panel is
    // the center value plus the corner spread.
    void axis_variation(const double* lo, const double* hi, int k, double* var) const {
        double mid[max_dim], half[max_dim];
        for (int j = 0; j < k; ++j) {
            mid[j] = 0.5 * (lo[j] + hi[j]);
            half[j] = 0.5 * (hi[j] - lo[j]);
        }
        for (int j = 0; j < k; ++j) {
            double c = p->b[j], spread = 0.0;
            for (int m = 0; m < k; ++m) {
                double a = p->A(j, m);
                c += 2.0 * a * mid[m];
                spread += 2.0 * std::abs(a) * half[m];
            }
            var[j] = (std::abs(c) + spread) * 2.0 * half[j];
        }
    }
};

// Duffy-mapped simplex integrand: the unit cube u maps onto the ordered
// simplex via y_j = u_1*...*u_j, then affinely onto the target simplex.
struct DuffySimplexPhase {
    static constexpr bool has_amplitude = true;
    const PhaseParameters* p;
    int k;
    std::vector<double> v0;    // first vertex
    std::vector<double> edges; // column j = v_{j+1} - v_j, row-major k x k
    double affine_jac;

    void map(const double* u, double* x) const {
        double y = 1.0;
        for (int i = 0; i < k; ++i) x[i] = v0[i];
        for (int j = 0; j < k; ++j) {
            y *= u[j];
            for (int i = 0; i < k; ++i) x[i] += y * edges[static_cast<std::size_t>(i) * k + j];
        }
    }

    double phase(const double* u) const {
        double x[max_dim];
        map(u, x);
        const int kk = k;
        double s = 0.0;
        for (int l = 0; l < kk; ++l) {
            double row = p->b[l];
            for (int m = 0; m < kk; ++m) row += p->A(l, m) * x[m];
            s += x[l] * row;
        }
        return s;
    }

    std::complex<double> amplitude(const double* u) const {
        double jac = affine_jac;
        double pw = 1.0;
        for (int j = 0; j + 1 < k; ++j) {
            pw *= u[j];
            jac *= pw; // prod_j u_j^{k-j}
        }
        return {jac, 0.0};
    }

    // sampled estimate on a 3-point-per-axis lattice; the leaf error check
    // backstops any underestimate
    void axis_variation(const double* lo, const double* hi, int kk, double* var) const {
        double pt[max_dim];
        for (int j = 0; j < kk; ++j) var[j] = 0.0;
        const int npts = int_pow(3, kk);
        for (int axis = 0; axis < kk; ++axis) {
            double vmax = 0.0;
            for (int c = 0; c < npts; ++c) {
                int cc = c;
                bool on_axis_edge = true;
                for (int j = 0; j < kk; ++j) {
                    int d = cc % 3;
                    cc /= 3;
                    pt[j] = lo[j] + 0.5 * d * (hi[j] - lo[j]);
                    if (j == axis && d != 0) on_axis_edge = false;
                }
                if (!on_axis_edge) continue;
                double p_lo = phase(pt);
                pt[axis] = hi[axis];
                double p_hi = phase(pt);
                pt[axis] = 0.5 * (lo[axis] + hi[axis]);
                double p_mid = phase(pt);
                double local = std::max(std::abs(p_hi - p_lo),
                                        std::abs(p_mid - p_lo) + std::abs(p_hi - p_mid));
                vmax = std::max(vmax, local);
            }
            var[axis] = 1.5 * vmax;
        }
    }
};

} // namespace detail

// Exact integral over [x0, x1] of e^{i(a x^2 + c x)} via the complex Fresnel
// primitive; the linear case is the elementary closed form.
inline std::complex<double> quadratic_segment_integral(double a, double c, double x0,
                                                       double x1) {
    const std::complex<double> I{0.0, 1.0};
    if (a == 0.0) {
        if (c == 0.0) return {x1 - x0, 0.0};
        return (std::exp(I * (c * x1)) - std::exp(I * (c * x0))) / (I * c);
    }
    const double al = std::abs(a);
    const double s = std::sqrt(al);
    const double cc = a > 0.0 ? c : -c;
    const double u0 = s * x0 + cc / (2.0 * s);
    const double u1 = s * x1 + cc / (2.0 * s);
    std::complex<double> de = fresnel_exp_primitive(u1) - fresnel_exp_primitive(u0);
    if (a < 0.0) de = std::conj(de);
    return std::polar(1.0 / s, -c * c / (4.0 * a)) * de;
}

namespace detail {

// Quadratic phase with one axis integrated out in closed form: the outer
// phase is the reduced quadratic (completing the square along the axis) and
// the amplitude is the Fresnel segment value, which depends on the remaining
// coordinates only through the linear coefficient c(x).
struct IteratedQuadPhase {
    static constexpr bool has_amplitude = true;
    int kr = 0;          // remaining dimension
    double a_diag = 0.0; // diagonal coefficient on the eliminated axis
    double x_lo = 0.0, x_hi = 0.0;
    double b_axis = 0.0;
    double cross[max_dim] = {};           // 2*a_{axis,m}, remaining indexing
    double ar[max_dim][max_dim] = {};     // reduced quadratic coefficients
    double br[max_dim] = {};
    double c0 = 0.0;                      // -b_axis^2 / (4 a_diag)

    IteratedQuadPhase(const PhaseParameters& p, int axis, double lo, double hi)
        : kr(p.order() - 1), a_diag(p.A(axis, axis)), x_lo(lo), x_hi(hi),
          b_axis(p.b[axis]) {
        const int k = p.order();
        int map[max_dim];
        int r = 0;
        for (int j = 0; j < k; ++j)
            if (j != axis) map[r++] = j;
        for (int l = 0; l < kr; ++l) {
            cross[l] = 2.0 * p.A(axis, map[l]);
            br[l] = p.b[map[l]] - b_axis * p.A(axis, map[l]) / a_diag;
            for (int m = 0; m < kr; ++m)
                ar[l][m] = p.A(map[l], map[m]) -
                           p.A(axis, map[l]) * p.A(axis, map[m]) / a_diag;
        }
        c0 = -b_axis * b_axis / (4.0 * a_diag);
    }

    double linear_coeff(const double* x) const {
        double c = b_axis;
        for (int m = 0; m < kr; ++m) c += cross[m] * x[m];
        return c;
    }

    double phase(const double* x) const {
        double s = c0;
        for (int l = 0; l < kr; ++l) {
            double row = br[l];
            for (int m = 0; m < kr; ++m) row += ar[l][m] * x[m];
            s += x[l] * row;
        }
        return s;
    }

    std::complex<double> amplitude(const double* x) const {
        const double c = linear_coeff(x);
        const double s = std::sqrt(std::abs(a_diag));
        const double cc = a_diag > 0.0 ? c : -c;
        const double u0 = s * x_lo + cc / (2.0 * s);
        const double u1 = s * x_hi + cc / (2.0 * s);
        std::complex<double> de = fresnel_exp_primitive(u1) - fresnel_exp_primitive(u0);
        if (a_diag < 0.0) de = std::conj(de);
        return de / s;
    }

    void axis_variation(const double* lo, const double* hi, int k, double* var) const {
        double mid[max_dim], half[max_dim];
        for (int j = 0; j < k; ++j) {
            mid[j] = 0.5 * (lo[j] + hi[j]);
            half[j] = 0.5 * (hi[j] - lo[j]);
        }
        // boundary-phase frequency of the amplitude: d(u^2)/dx_j =
        // cross_j * (x_bnd + c/(2a)) at the endpoints of the inner segment
        const double c_mid = linear_coeff(mid);
        const double shift = std::abs(c_mid) / (2.0 * std::abs(a_diag));
        const double x_bnd = std::max(std::abs(x_lo), std::abs(x_hi)) + shift;
        for (int j = 0; j < k; ++j) {
            double c = br[j], spread = 0.0;
            for (int m = 0; m < k; ++m) {
                c += 2.0 * ar[j][m] * mid[m];
                spread += 2.0 * std::abs(ar[j][m]) * half[m];
            }
            double bnd = std::abs(cross[j]) * x_bnd;
            var[j] = (std::abs(c) + spread + bnd) * 2.0 * half[j];
        }
    }
};

inline IntegralResult t_box_engine(const PhaseParameters& params, const Region& region,
                                   const QuadratureBudget& budget) {
    QuadraticPhase f{&params};
    OscEngine<QuadraticPhase> engine(region.k, f, budget);
    return engine.run(region.lower.data(), region.upper.data());
}

inline IntegralResult t_box_iterated(const PhaseParameters& params, const Region& region,
                                     int axis, const QuadratureBudget& budget) {
    const int k = region.k;
    IteratedQuadPhase f(params, axis, region.lower[axis], region.upper[axis]);
    const double inner_eps = 3e-9 / std::sqrt(std::abs(f.a_diag));
    if (k == 1) {
        IntegralResult r;
        r.value = quadratic_segment_integral(params.A(0, 0), params.b[0],
                                             region.lower[0], region.upper[0]);
        r.err_abs = inner_eps;
        r.n_evals = 1;
        r.method = "closed-fresnel";
        r.converged = r.err_abs <= budget.tol;
        return r;
    }
    double lo[max_dim], hi[max_dim];
    double vol_rest = 1.0;
    int r = 0;
    for (int j = 0; j < k; ++j) {
        if (j == axis) continue;
        lo[r] = region.lower[j];
        hi[r] = region.upper[j];
        vol_rest *= hi[r] - lo[r];
        ++r;
    }
    OscEngine<IteratedQuadPhase> engine(k - 1, f, budget);
    IntegralResult res = engine.run(lo, hi);
    res.err_abs += inner_eps * vol_rest;
    res.method = "iterated-fresnel/" + res.method;
    res.converged = res.converged && res.err_abs <= budget.tol;
    return res;
}

} // namespace detail

// T(A,b) over a box: integral of e^{iP(x,A,b)} dx. When one diagonal
// coefficient dominates (hundreds of radians across the box), that axis is
// integrated exactly via Fresnel primitives and only the remaining
// dimensions go through the adaptive engine.
inline IntegralResult t_box(const PhaseParameters& params, const Region& region,
                            const QuadratureBudget& budget) {
    if (region.kind == Region::Kind::simplex_union)
        throw std::invalid_argument("t_box: region must be a box");
    if (region.k != params.order())
        throw std::invalid_argument("t_box: region dimension mismatch");

    int best = -1;
    double best_var = 0.0;
    for (int j = 0; j < region.k; ++j) {
        double w = region.upper[j] - region.lower[j];
        double v = std::abs(params.A(j, j)) * w * w;
        if (v > best_var) {
            best_var = v;
            best = j;
        }
    }
    IntegralResult r;
    if (best >= 0 && best_var >= 200.0) {
        r = detail::t_box_iterated(params, region, best, budget);
        r.method = "t_box/" + r.method;
    } else {
        r = detail::t_box_engine(params, region, budget);
        r.method = "t_box/" + r.method;
    }
#ifndef NDEBUG
    assert(std::abs(r.value) <= region.box_volume() * (1.0 + 1e-9) + r.err_abs);
#endif
    return r;
}

// T(A,b) over a finite union of nondegenerate simplices.
inline IntegralResult t_polytope(const PhaseParameters& params, const Region& region,
                                 const QuadratureBudget& budget) {
    if (region.kind != Region::Kind::simplex_union)
        throw std::invalid_argument("t_polytope: region must be a simplex union");
    const int k = region.k;
    if (k != params.order())
        throw std::invalid_argument("t_polytope: region dimension mismatch");

    IntegralResult total;
    total.method = "t_polytope/duffy";
    total.converged = true;
    QuadratureBudget per = budget;
    per.tol = budget.tol / static_cast<double>(region.simplices.size());

    for (const auto& simp : region.simplices) {
        detail::DuffySimplexPhase f;
        f.p = &params;
        f.k = k;
        f.v0 = simp[0];
        f.edges.resize(static_cast<std::size_t>(k) * k);
        double scale = 0.0;
        for (int j = 0; j < k; ++j) {
            double len2 = 0.0;
            for (int i = 0; i < k; ++i) {
                double e = simp[j + 1][i] - simp[j][i];
                f.edges[static_cast<std::size_t>(i) * k + j] = e;
                len2 += e * e;
            }
            scale = std::max(scale, std::sqrt(len2));
        }
        // |det| of the edge matrix via LU
        {
            std::vector<double> lu = f.edges;
            double det = 1.0;
            for (int col = 0; col < k; ++col) {
                int piv = col;
                for (int r = col + 1; r < k; ++r)
                    if (std::abs(lu[static_cast<std::size_t>(r) * k + col]) >
                        std::abs(lu[static_cast<std::size_t>(piv) * k + col]))
                        piv = r;
                if (piv != col) {
                    for (int j = 0; j < k; ++j)
                        std::swap(lu[static_cast<std::size_t>(piv) * k + j],
                                  lu[static_cast<std::size_t>(col) * k + j]);
                    det = -det;
                }
                double d = lu[static_cast<std::size_t>(col) * k + col];
                det *= d;
                if (d == 0.0) break;
                for (int r = col + 1; r < k; ++r) {
                    double fac = lu[static_cast<std::size_t>(r) * k + col] / d;
                    for (int j = col; j < k; ++j)
                        lu[static_cast<std::size_t>(r) * k + j] -=
                            fac * lu[static_cast<std::size_t>(col) * k + j];
                }
            }
            f.affine_jac = std::abs(det);
            double floor = 1e-12;
            for (int j = 0; j < k; ++j) floor *= std::max(scale, 1e-30);
            if (!(f.affine_jac > floor))
                throw std::invalid_argument("t_polytope: degenerate simplex");
        }

        per.max_evals = budget.max_evals - total.n_evals;
        if (per.max_evals < 1) {
            total.converged = false;
            break;
        }
        detail::OscEngine<detail::DuffySimplexPhase> engine(k, f, per);
        std::vector<double> lo(k, 0.0), hi(k, 1.0);
        IntegralResult r = engine.run(lo.data(), hi.data());
        total.value += r.value;
        total.err_abs += r.err_abs;
        total.n_evals += r.n_evals;
        total.converged = total.converged && r.converged;
    }
    return total;
}

// T_infinity oracle: tensor Gauss-Hermite (weight e^{-|x|^2}) of e^{iP},
// evaluated in the principal-axis frame of A where the tensor sum
// factorizes into k one-dimensional sums. The frame rotation leaves the
// weight and the rule invariant; no closed-form branch enters here.
inline std::complex<double> t_gauss_damped(const PhaseParameters& params, int order) {
    if (order < 20) throw std::invalid_argument("t_gauss_damped: order must be >= 20");
    const int k = params.order();
    Spectrum s = eig_sym(params.A);
    const Rule1D& rule = gauss_hermite(order);
    std::complex<double> prod{1.0, 0.0};
    for (int j = 0; j < k; ++j) {
        double c = 0.0;
        for (int i = 0; i < k; ++i) c += s.rot(i, j) * params.b[i];
        const double lam = s.eigenvalues[j];
        std::complex<double> sum{0.0, 0.0};
        for (std::size_t i = 0; i < rule.x.size(); ++i) {
            double x = rule.x[i];
            double ph = lam * x * x + c * x;
            sum += rule.w[i] * std::complex<double>(std::cos(ph), std::sin(ph));
        }
        prod *= sum;
    }
    return prod;
}

// Gauss-Hermite order that resolves the oscillation of e^{i lambda x^2}
// against e^{-x^2}; calibrated empirically (rel. error ~1e-9 at 12*lam^2).
inline int recommended_gh_order(const SymmetricMatrix& A) {
    double g = A.gershgorin_radius();
    int n = 80 + static_cast<int>(std::ceil(12.0 * g * g));
    n = ((n + 31) / 32) * 32; // quantize so repeated trials share cached rules
    return std::min(n, 4000);
}

} // namespace oscint
