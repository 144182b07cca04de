#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace oscint {

// Real symmetric k x k matrix, packed row-major upper triangle.
class SymmetricMatrix {
public:
    explicit SymmetricMatrix(int k) : k_(check_order(k)), coeffs_(packed_size(k), 0.0) {}

    SymmetricMatrix(int k, std::vector<double> packed)
        : k_(check_order(k)), coeffs_(std::move(packed)) {
        if (coeffs_.size() != packed_size(k_))
            throw std::invalid_argument("SymmetricMatrix: packed length must be k(k+1)/2");
        for (double v : coeffs_)
            if (!std::isfinite(v))
                throw std::invalid_argument("SymmetricMatrix: entries must be finite");
    }

    static SymmetricMatrix identity(int k) {
        SymmetricMatrix a(k);
        for (int l = 0; l < k; ++l) a.set(l, l, 1.0);
        return a;
    }

    int order() const { return k_; }

    double operator()(int l, int m) const {
        if (l > m) std::swap(l, m);
        return coeffs_[index(l, m)];
    }

    void set(int l, int m, double v) {
        if (l > m) std::swap(l, m);
        coeffs_[index(l, m)] = v;
    }

    const std::vector<double>& packed() const { return coeffs_; }

    double max_abs() const {
        double r = 0.0;
        for (double v : coeffs_) r = std::max(r, std::abs(v));
        return r;
    }

    SymmetricMatrix scaled(double t) const {
        SymmetricMatrix a(*this);
        for (double& v : a.coeffs_) v *= t;
        return a;
    }

    // Gershgorin bound on the spectral radius.
    double gershgorin_radius() const {
        double r = 0.0;
        for (int l = 0; l < k_; ++l) {
            double s = 0.0;
            for (int m = 0; m < k_; ++m) s += std::abs((*this)(l, m));
            r = std::max(r, s);
        }
        return r;
    }

    static std::size_t packed_size(int k) {
        return static_cast<std::size_t>(k) * (k + 1) / 2;
    }

private:
    static int check_order(int k) {
        if (k < 1) throw std::invalid_argument("SymmetricMatrix: order must be positive");
        return k;
    }

    std::size_t index(int l, int m) const {
        // row-major upper triangle, l <= m
        return static_cast<std::size_t>(l) * k_ - static_cast<std::size_t>(l) * (l - 1) / 2
               + static_cast<std::size_t>(m - l);
    }

    int k_;
    std::vector<double> coeffs_;
};

// Phase P(x,A,b) = (Ax,x) + (b,x); b = 0 is the homogeneous case.
struct PhaseParameters {
    SymmetricMatrix A;
    std::vector<double> b;

    PhaseParameters(SymmetricMatrix a, std::vector<double> bv)
        : A(std::move(a)), b(std::move(bv)) {
        if (b.size() != static_cast<std::size_t>(A.order()))
            throw std::invalid_argument("PhaseParameters: length(b) must equal order(A)");
    }

    static PhaseParameters homogeneous(SymmetricMatrix a) {
        std::vector<double> z(a.order(), 0.0);
        return PhaseParameters(std::move(a), std::move(z));
    }

    int order() const { return A.order(); }
};

// Eigendecomposition A = rotation * diag(eigenvalues) * rotation^T with
// rotation in SO_k and eigenvalues ascending.
struct Spectrum {
    std::vector<double> eigenvalues;
    std::vector<double> rotation; // k x k row-major, column j = eigenvector j

    double rot(int i, int j) const {
        return rotation[static_cast<std::size_t>(i) * eigenvalues.size() + j];
    }
};

inline double quadratic_phase_eval(const PhaseParameters& params, std::span<const double> x) {
    const int k = params.order();
    if (x.size() != static_cast<std::size_t>(k))
        throw std::invalid_argument("quadratic_phase_eval: length(x) must equal k");
    double s = 0.0;
    for (int l = 0; l < k; ++l) {
        double row = 0.0;
        for (int m = 0; m < k; ++m) row += params.A(l, m) * x[m];
        s += x[l] * row + params.b[l] * x[l];
    }
    return s;
}

// Cyclic Jacobi; always converges on symmetric input.
inline Spectrum eig_sym(const SymmetricMatrix& A) {
    const int k = A.order();
    std::vector<double> a(static_cast<std::size_t>(k) * k);
    std::vector<double> v(static_cast<std::size_t>(k) * k, 0.0);
    for (int i = 0; i < k; ++i) {
        v[static_cast<std::size_t>(i) * k + i] = 1.0;
        for (int j = 0; j < k; ++j) a[static_cast<std::size_t>(i) * k + j] = A(i, j);
    }
    auto at = [&](std::vector<double>& m, int i, int j) -> double& {
        return m[static_cast<std::size_t>(i) * k + j];
    };
    double fro = 0.0;
    for (double e : a) fro += e * e;
    fro = std::sqrt(fro);
    const double stop = 1e-14 * fro;

    for (int sweep = 0; sweep < 50 && k > 1; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < k; ++p)
            for (int q = p + 1; q < k; ++q) off += 2.0 * at(a, p, q) * at(a, p, q);
        if (std::sqrt(off) <= stop) break;
        for (int p = 0; p < k; ++p) {
            for (int q = p + 1; q < k; ++q) {
                double apq = at(a, p, q);
                if (apq == 0.0) continue;
                double theta = (at(a, q, q) - at(a, p, p)) / (2.0 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                double tau = s / (1.0 + c);
                double app = at(a, p, p), aqq = at(a, q, q);
                at(a, p, p) = app - t * apq;
                at(a, q, q) = aqq + t * apq;
                at(a, p, q) = at(a, q, p) = 0.0;
                for (int r = 0; r < k; ++r) {
                    if (r != p && r != q) {
                        double arp = at(a, r, p), arq = at(a, r, q);
                        at(a, r, p) = at(a, p, r) = arp - s * (arq + tau * arp);
                        at(a, r, q) = at(a, q, r) = arq + s * (arp - tau * arq);
                    }
                    double vrp = at(v, r, p), vrq = at(v, r, q);
                    at(v, r, p) = vrp - s * (vrq + tau * vrp);
                    at(v, r, q) = vrq + s * (vrp - tau * vrq);
                }
            }
        }
    }

    Spectrum spec;
    spec.eigenvalues.resize(k);
    for (int i = 0; i < k; ++i) spec.eigenvalues[i] = at(a, i, i);

    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(), [&](int i, int j) {
        return spec.eigenvalues[i] < spec.eigenvalues[j];
    });
    std::sort(spec.eigenvalues.begin(), spec.eigenvalues.end());

    spec.rotation.resize(static_cast<std::size_t>(k) * k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            spec.rotation[static_cast<std::size_t>(i) * k + j] = at(v, i, perm[j]);

    // force det = +1 with a single column sign flip
    {
        std::vector<double> lu = spec.rotation;
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
                double f = lu[static_cast<std::size_t>(r) * k + col] / d;
                for (int j = col; j < k; ++j)
                    lu[static_cast<std::size_t>(r) * k + j] -=
                        f * lu[static_cast<std::size_t>(col) * k + j];
            }
        }
        if (det < 0.0)
            for (int i = 0; i < k; ++i)
                spec.rotation[static_cast<std::size_t>(i) * k + (k - 1)] *= -1.0;
    }
    return spec;
}

// prod_j (1 + lambda_j^2), always >= 1
inline double det_one_plus_A_sq(const SymmetricMatrix& A) {
    Spectrum s = eig_sym(A);
    double p = 1.0;
    for (double lam : s.eigenvalues) p *= 1.0 + lam * lam;
    return p;
}

// prod_{l<m} |lambda_m - lambda_l|; 1 for k=1 (empty product)
inline double vandermonde_abs(std::span<const double> lambda) {
    double p = 1.0;
    const std::size_t k = lambda.size();
    for (std::size_t l = 0; l + 1 < k; ++l)
        for (std::size_t m = l + 1; m < k; ++m) p *= std::abs(lambda[m] - lambda[l]);
    return p;
}

// ((I - iA)^{-1} b, b) = sum_j c_j^2 / (1 - i lambda_j), c = rotation^T b.
// Real part equals ((I + A^2)^{-1} b, b).
inline std::complex<double> resolvent_quadratic(const SymmetricMatrix& A,
                                                const std::vector<double>& b) {
    const int k = A.order();
    if (b.size() != static_cast<std::size_t>(k))
        throw std::invalid_argument("resolvent_quadratic: length(b) must equal k");
    Spectrum s = eig_sym(A);
    std::complex<double> out = 0.0;
    for (int j = 0; j < k; ++j) {
        double c = 0.0;
        for (int i = 0; i < k; ++i) c += s.rot(i, j) * b[i];
        out += c * c / std::complex<double>(1.0, -s.eigenvalues[j]);
    }
    return out;
}

} // namespace oscint
